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

#ifndef SCANEDIT__METRICS_HPP_
#define SCANEDIT__METRICS_HPP_

#include "scanedit/spherical_grid.hpp"
#include "scanedit/types.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scanedit
{

/// Azimuth-radius occupancy histogram, values[t * n_r + r].
struct BevHistogram
{
  int n_theta = 0;
  int n_r = 0;
  std::vector<double> values;
  bool normalized = false;

  double at(int t, int r) const
  {
    return values[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_r) +
                  static_cast<std::size_t>(r)];
  }
  double sum() const;
};

/// Occupied voxels summed over elevation. With a region, columns holding no
/// masked voxel are zeroed first. Normalized unless all-zero.
BevHistogram bev_histogram(const VoxelVolume & occupied, const VoxelMask * region = nullptr);
inline BevHistogram bev_histogram(const OccupancyGrid & grid, const VoxelMask * region = nullptr)
{
  return bev_histogram(grid.occupied, region);
}

/// Number of (t, r) columns holding at least one masked voxel.
std::size_t region_columns(const VoxelMask & region);

/// Jensen-Shannon divergence; natural log unless `log_base` is given.
/// Throws UnnormalizedInput unless both inputs sum to 1 (1e-9) and share a
/// shape.
double jsd(const BevHistogram & p, const BevHistogram & q, double log_base = std::exp(1.0));

struct MmdResult
{
  double value = 0.0;
  double bandwidth = 0.0;
};

/// Squared MMD with a Gaussian kernel over flattened histograms, unbiased
/// within-set terms for sets of two or more (a singleton uses k(a, a)),
/// bandwidth from the median pairwise distance when unset, clamped at 0.
/// Throws EmptySet.
MmdResult mmd(
  std::span<const BevHistogram> x, std::span<const BevHistogram> y,
  std::optional<double> bandwidth = std::nullopt);

/// Symmetric sum of the two directed mean nearest-neighbor distances.
/// Throws EmptyCloud.
double chamfer(const PointCloud & a, const PointCloud & b);

/// Mean nearest-neighbor distance from each point of `from` to `to`.
double directed_chamfer(const PointCloud & from, const PointCloud & to);

struct MetricRow
{
  std::string name;
  double value = 0.0;
  std::string parameters;
  std::size_t region_size = 0;
};

/// Tab-separated lines: name, value, parameters, region size. Header first.
std::string format_metric_report(std::span<const MetricRow> rows);

}  // namespace scanedit

#endif  // SCANEDIT__METRICS_HPP_
