// Copyright 2026 The scanedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCANEDIT__REFERENCE_HPP_
#define SCANEDIT__REFERENCE_HPP_

#include "scanedit/metrics.hpp"
#include "scanedit/simulator.hpp"
#include "scanedit/spherical_grid.hpp"

#include <cstdint>
#include <vector>

// Serial, dense-array versions of the parallel kernels. They share no code
// with the bitset implementation beyond single-point binning and are used by
// the tests and the benchmark as ground truth.
namespace scanedit::reference
{

/// One byte per voxel, ir-major: cells[(ir * n_theta + itheta) * n_phi + iphi].
struct DenseGrid
{
  explicit DenseGrid(const GridConfig & cfg);

  GridConfig config;
  std::vector<std::uint8_t> cells;

  std::uint8_t & at(int ir, int itheta, int iphi);
  std::uint8_t at(int ir, int itheta, int iphi) const;

  static DenseGrid from_volume(const VoxelVolume & volume);
  VoxelVolume to_volume() const;
};

DenseGrid voxelize(const PointCloud & cloud, const GridConfig & cfg);
DenseGrid occlusion_mask(const DenseGrid & occupied);
DenseGrid resolve_occlusion(const DenseGrid & occupied);
DenseGrid deocclusion_mask(const DenseGrid & object_voxels);
PointCloud resample(const DenseGrid & occupied);
BevHistogram bev_histogram(const DenseGrid & occupied);

/// O(n m) nearest neighbors.
double chamfer(const PointCloud & a, const PointCloud & b);

/// Per-ray first-hit range, computed one ray at a time.
std::vector<double> raycast_ranges(const AnalyticScene & scene, const GridConfig & cfg);

}  // namespace scanedit::reference

#endif  // SCANEDIT__REFERENCE_HPP_
