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

#ifndef SCANEDIT__SIMULATOR_HPP_
#define SCANEDIT__SIMULATOR_HPP_

#include "scanedit/scan_io.hpp"
#include "scanedit/spherical_grid.hpp"
#include "scanedit/types.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace scanedit
{

/// z = a x + b y + c
struct SceneGround
{
  double a = 0.0;
  double b = 0.0;
  double c = -1.8;

  double z_at(double x, double y) const { return a * x + b * y + c; }
};

/// Vertical plane nx x + ny y = d.
struct Wall
{
  double nx = 1.0;
  double ny = 0.0;
  double d = 0.0;
};

struct AnalyticScene
{
  SceneGround ground;
  std::vector<LabeledBox> objects;
  std::vector<Wall> walls;

  /// Throws InvalidArgument for grades of 10 degrees or more, degenerate
  /// walls, or boxes that dip below the ground.
  void validate() const;
};

inline constexpr int kSurfaceGround = -1;
inline constexpr int kSurfaceWall = -2;
inline constexpr int kSurfaceNone = std::numeric_limits<int>::min();

struct RaycastOptions
{
  /// Gaussian range noise; 0 disables it.
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  Label ground_label = 24;
  Label wall_label = 28;
  CategoryLabels category_labels;
};

struct RaycastScan
{
  /// Labeled; one point per hitting ray, in ray order.
  PointCloud cloud;
  /// Per ray (theta-major): range of the emitted point, or +inf.
  std::vector<double> hit_ranges;
  std::vector<std::size_t> point_rays;
  /// Per point: object index, kSurfaceGround or kSurfaceWall.
  std::vector<int> point_surfaces;
  /// Per ray: the surface hit, or kSurfaceNone.
  std::vector<int> ray_surfaces;
};

/// Nearest positive intersection of the unit ray from the origin with the
/// ground plane, or +inf.
double ground_intersection(const SceneGround & ground, const Vec3 & dir);

/// One ray per (itheta, iphi) bin center; a point is emitted when the nearest
/// surface is closer than r_max.
RaycastScan raycast_scan(
  const AnalyticScene & scene, const GridConfig & cfg, const RaycastOptions & options = {});

struct ScanPair
{
  RaycastScan with;
  RaycastScan without;
  /// Points of `without` on the rays where `with` hit the object.
  PointCloud revealed;
};

/// Throws InvalidArgument for a bad object index.
ScanPair paired_scans(
  const AnalyticScene & scene, std::size_t object, const GridConfig & cfg,
  const RaycastOptions & options = {});

/// `ground a b c`, `wall nx ny d` and box lines. Throws MalformedScene.
AnalyticScene read_scene_text(const std::string & text);
std::string write_scene_text(const AnalyticScene & scene);

}  // namespace scanedit

#endif  // SCANEDIT__SIMULATOR_HPP_
