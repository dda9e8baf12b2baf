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

#ifndef SCANEDIT__EVAL_MASK_HPP_
#define SCANEDIT__EVAL_MASK_HPP_

#include "scanedit/spherical_grid.hpp"
#include "scanedit/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace scanedit
{

/// Region a solid box would occupy or hide: on every ray that enters the box
/// at range t < r_max, all voxels with ir >= floor(t / dr).
VoxelMask box_shadow_mask(const BoundingBox & box, const GridConfig & cfg);

struct SynthMaskOptions
{
  double distance = 10.0;
  double step_deg = 1.0;
  double start_deg = 0.0;
  double margin = 0.1;
  SemanticClassSets classes;
  /// Ground height used when the scan has no labels to look it up from.
  double fallback_ground_z = -1.84;
};

struct SynthMask
{
  VoxelMask mask;
  /// Scan points inside the mask; the inpainting ground truth.
  std::vector<std::size_t> held_out_indices;
  PointCloud held_out;
  /// The scan without the held-out points.
  PointCloud background;
  BoundingBox box;
  double azimuth_deg = 0.0;
};

/// Places a box of `avg_size` at `distance` with its heading orthogonal to
/// the viewing direction and sweeps the azimuth in `step_deg` increments
/// until its shadow holds no object point (inside a box or vehicle-labeled).
/// Throws NoObjectFreeSector.
SynthMask synth_eval_mask(
  const PointCloud & scan, std::span<const BoundingBox> boxes, const Vec3 & avg_size,
  const GridConfig & cfg, const SynthMaskOptions & options = {});

}  // namespace scanedit

#endif  // SCANEDIT__EVAL_MASK_HPP_
