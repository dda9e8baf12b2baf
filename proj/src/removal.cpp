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

#include "scanedit/removal.hpp"

#include "scanedit/error.hpp"

#include <algorithm>

namespace scanedit
{

namespace
{
constexpr std::ptrdiff_t kParallelRays = 2048;
}  // namespace

VoxelMask deocclusion_mask(const VoxelVolume & object_voxels)
{
  const GridConfig & cfg = object_voxels.config();
  VoxelMask mask(cfg);
  const auto rays = static_cast<std::ptrdiff_t>(cfg.ray_count());
#pragma omp parallel for schedule(static) if (rays >= kParallelRays)
  for (std::ptrdiff_t ray = 0; ray < rays; ++ray) {
    const int first = object_voxels.first_in_ray(static_cast<std::size_t>(ray));
    if (first >= 0) {
      mask.set_range(static_cast<std::size_t>(ray), first, cfg.n_r);
    }
  }
  return mask;
}

VoxelMask deocclusion_mask(const OccupancyGrid & grid, std::span<const VoxelIndex> object_voxels)
{
  VoxelVolume objects(grid.config);
  for (const auto & v : object_voxels) {
    if (v.ir < 0 || v.ir >= grid.config.n_r || v.itheta < 0 || v.itheta >= grid.config.n_theta ||
      v.iphi < 0 || v.iphi >= grid.config.n_phi)
    {
      throw Error(ErrorCode::kInvalidArgument, "object voxel outside the grid");
    }
    objects.set(v);
  }
  return deocclusion_mask(objects);
}

std::vector<VoxelIndex> object_voxels_of(
  const PointCloud & cloud, const BoundingBox & box, double margin, const GridConfig & cfg)
{
  std::vector<VoxelIndex> out;
  for (const Point & p : cloud.points()) {
    if (box_contains(box, p, margin)) {
      if (const auto v = voxel_of(p.position(), cfg)) {
        out.push_back(*v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint8_t> object_point_flags(
  const PointCloud & cloud, std::span<const BoundingBox> boxes, double margin,
  const SemanticClassSets & classes)
{
  std::vector<std::uint8_t> flags(cloud.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (cloud.has_labels() && classes.is_vehicle(cloud.label(idx))) {
      flags[idx] = 1;
      continue;
    }
    for (const auto & box : boxes) {
      if (box_contains(box, cloud[idx], margin)) {
        flags[idx] = 1;
        break;
      }
    }
  }
  return flags;
}

RemovalResult remove_object(
  const PointCloud & scan, const BoundingBox & box, const Inpainter & inpainter,
  const GridConfig & cfg, const RemovalOptions & options)
{
  if (options.margin < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "box margin must be non-negative");
  }
  cfg.validate();

  std::vector<std::uint8_t> keep(scan.size(), 1);
  VoxelVolume object_voxels(cfg);
  RemovalResult result{PointCloud{}, VoxelMask(cfg), {}, 0, 0, 0};
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (box_contains(box, scan[i], options.margin)) {
      keep[i] = 0;
      result.deleted_indices.push_back(i);
      if (const auto v = voxel_of(scan[i].position(), cfg)) {
        object_voxels.set(*v);
      }
    }
  }
  if (result.deleted_indices.empty()) {
    throw Error(ErrorCode::kEmptyObject, "no points inside the box selected for removal");
  }

  PointCloud background = scan.filter(keep);
  const OccupancyGrid background_grid = voxelize(background, cfg);
  result.mask = deocclusion_mask(object_voxels);

  const InpaintRequest request{
    background, background_grid, result.mask, cfg, options.other_objects, options.classes,
    options.margin};
  const std::vector<Point> fill = result.mask.none() ? std::vector<Point>{} : inpainter.fill(request);

  result.cloud = std::move(background);
  result.inpainted_begin = result.cloud.size();
  result.cloud.reserve(result.cloud.size() + fill.size());
  for (Point p : fill) {
    const auto v = voxel_of(p.position(), cfg);
    if (!v || !result.mask.test(*v)) {
      ++result.rejected_fill;
      continue;
    }
    p.intensity = 0.0f;
    p.ring.reset();
    result.cloud.push_back(p, options.inpainted_label);
  }
  result.inpainted_end = result.cloud.size();
  return result;
}

}  // namespace scanedit
