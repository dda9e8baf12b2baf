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

#include "scanedit/eval_mask.hpp"

#include "scanedit/error.hpp"
#include "scanedit/insertion.hpp"
#include "scanedit/removal.hpp"

#include <algorithm>
#include <cmath>

namespace scanedit
{

VoxelMask box_shadow_mask(const BoundingBox & box, const GridConfig & cfg)
{
  cfg.validate();
  VoxelMask mask(cfg);
  const double dr = cfg.dr();
  const auto n_rays = static_cast<std::ptrdiff_t>(cfg.ray_count());
#pragma omp parallel for schedule(static) if (n_rays >= 2048)
  for (std::ptrdiff_t k = 0; k < n_rays; ++k) {
    const auto ray = static_cast<std::size_t>(k);
    const int itheta = static_cast<int>(ray / static_cast<std::size_t>(cfg.n_phi));
    const int iphi = static_cast<int>(ray % static_cast<std::size_t>(cfg.n_phi));
    const auto t = ray_box_entry(Vec3::Zero(), ray_direction(itheta, iphi, cfg), box);
    if (t && *t < cfg.r_max) {
      const int lo = std::min(static_cast<int>(std::floor(*t / dr)), cfg.n_r - 1);
      mask.set_range(ray, lo, cfg.n_r);
    }
  }
  return mask;
}

SynthMask synth_eval_mask(
  const PointCloud & scan, std::span<const BoundingBox> boxes, const Vec3 & avg_size,
  const GridConfig & cfg, const SynthMaskOptions & options)
{
  cfg.validate();
  if (!(options.step_deg > 0.0) || !(options.distance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sweep step and distance must be positive");
  }
  const OccupancyGrid grid = voxelize(scan, cfg);
  const std::vector<std::uint8_t> is_object =
    object_point_flags(scan, boxes, options.margin, options.classes);

  VoxelVolume object_voxels(cfg);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (is_object[i] && grid.point_voxels[i] != kNoVoxel) {
      object_voxels.set_id(grid.point_voxels[i]);
    }
  }

  std::vector<std::uint8_t> is_ground(scan.size(), 0);
  bool have_ground = false;
  if (scan.has_labels()) {
    for (std::size_t i = 0; i < scan.size(); ++i) {
      is_ground[i] = options.classes.is_ground(scan.label(i));
      have_ground = have_ground || is_ground[i];
    }
  }

  const int steps = static_cast<int>(std::ceil(360.0 / options.step_deg - 1e-9));
  for (int s = 0; s < steps; ++s) {
    const double az_deg = options.start_deg + s * options.step_deg;
    const double az = deg_to_rad(az_deg);
    const double x = options.distance * std::cos(az);
    const double y = options.distance * std::sin(az);
    const double ground =
      have_ground ? nearest_ground_point(scan, x, y, is_ground).z : options.fallback_ground_z;
    const BoundingBox box(Vec3(x, y, ground + 0.5 * avg_size.z()), avg_size, az + 0.5 * kPi);

    VoxelMask mask = box_shadow_mask(box, cfg);
    if (mask.none() || mask.intersects(object_voxels)) {
      continue;
    }
    SynthMask out{std::move(mask), {}, {}, {}, box, std::fmod(az_deg, 360.0)};
    std::vector<std::uint8_t> keep(scan.size(), 1);
    for (std::size_t i = 0; i < scan.size(); ++i) {
      const VoxelId id = grid.point_voxels[i];
      if (id != kNoVoxel && out.mask.test_id(id)) {
        out.held_out_indices.push_back(i);
        keep[i] = 0;
      }
    }
    out.held_out = scan.subset(out.held_out_indices);
    out.background = scan.filter(keep);
    return out;
  }
  throw Error(
    ErrorCode::kNoObjectFreeSector, "no azimuth leaves the evaluation box clear of object points");
}

}  // namespace scanedit
