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

#ifndef SCANEDIT__REMOVAL_HPP_
#define SCANEDIT__REMOVAL_HPP_

#include "scanedit/spherical_grid.hpp"
#include "scanedit/types.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace scanedit
{

/// Voxels occupied by the object plus every voxel behind them on the same
/// ray: per ray, all ir >= the ray's nearest object voxel.
VoxelMask deocclusion_mask(const VoxelVolume & object_voxels);
VoxelMask deocclusion_mask(const OccupancyGrid & grid, std::span<const VoxelIndex> object_voxels);

/// Voxels of the points inside `box` inflated by `margin`, sorted and unique.
std::vector<VoxelIndex> object_voxels_of(
  const PointCloud & cloud, const BoundingBox & box, double margin, const GridConfig & cfg);

/// What an inpainter sees: the background with the object deleted, its grid,
/// and the region to fill.
struct InpaintRequest
{
  const PointCloud & background;
  const OccupancyGrid & background_grid;
  const VoxelMask & mask;
  const GridConfig & config;
  /// Annotated objects still present in the scene; donor regions must avoid
  /// their points.
  std::span<const BoundingBox> object_boxes;
  const SemanticClassSets & classes;
  double object_margin = 0.1;
};

/// Fills a masked region with background points. Implementations must only
/// return points that voxelize into masked voxels.
class Inpainter
{
public:
  virtual ~Inpainter() = default;
  virtual std::string_view name() const = 0;
  virtual std::vector<Point> fill(const InpaintRequest & request) const = 0;
};

struct RemovalOptions
{
  double margin = 0.1;
  /// Label given to inpainted points (0 is nuScenes "noise").
  Label inpainted_label = 0;
  std::span<const BoundingBox> other_objects;
  SemanticClassSets classes;
};

struct RemovalResult
{
  PointCloud cloud;
  VoxelMask mask;
  std::vector<std::size_t> deleted_indices;
  /// Inpainted points are cloud[inpainted_begin, inpainted_end).
  std::size_t inpainted_begin = 0;
  std::size_t inpainted_end = 0;
  /// Inpainter points discarded for falling outside the mask.
  std::size_t rejected_fill = 0;
};

/// Deletes the points inside `box` (with margin), masks the region they
/// occupied or occluded, and appends the inpainter's fill. Throws EmptyObject
/// when the box selects no points.
RemovalResult remove_object(
  const PointCloud & scan, const BoundingBox & box, const Inpainter & inpainter,
  const GridConfig & cfg, const RemovalOptions & options = {});

/// Per-point flag: inside any of `boxes` (with margin) or carrying a vehicle
/// label.
std::vector<std::uint8_t> object_point_flags(
  const PointCloud & cloud, std::span<const BoundingBox> boxes, double margin,
  const SemanticClassSets & classes);

}  // namespace scanedit

#endif  // SCANEDIT__REMOVAL_HPP_
