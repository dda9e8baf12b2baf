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

#ifndef SCANEDIT__TYPES_HPP_
#define SCANEDIT__TYPES_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace scanedit
{

using Vec3 = Eigen::Vector3d;
using Label = std::uint8_t;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle in radians into [-pi, pi).
double normalize_yaw(double yaw);

/// A single LiDAR return in the sensor frame (meters).
struct Point
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  float intensity = 0.0f;
  std::optional<std::int32_t> ring;

  Vec3 position() const { return {x, y, z}; }
  bool finite() const;

  bool operator==(const Point &) const = default;

  static Point at(const Vec3 & p, float intensity = 0.0f)
  {
    return Point{p.x(), p.y(), p.z(), intensity, std::nullopt};
  }
};

/// Ordered points with optional per-point class ids. When labels are present
/// there is exactly one per point.
class PointCloud
{
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point> points) : points_(std::move(points)) {}
  PointCloud(std::vector<Point> points, std::vector<Label> labels);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  bool has_labels() const { return labels_.has_value(); }

  const std::vector<Point> & points() const { return points_; }
  std::vector<Point> & points() { return points_; }
  const Point & operator[](std::size_t i) const { return points_[i]; }
  Point & operator[](std::size_t i) { return points_[i]; }

  /// Throws if the cloud carries no labels.
  const std::vector<Label> & labels() const;
  Label label(std::size_t i) const { return (*labels_)[i]; }

  void set_labels(std::vector<Label> labels);
  void clear_labels() { labels_.reset(); }

  /// Appends a point. `label` is stored when the cloud is labeled and ignored
  /// otherwise.
  void push_back(const Point & p, Label label = 0);
  void reserve(std::size_t n);

  /// Copy of the points at `indices`, in that order, with their labels.
  PointCloud subset(std::span<const std::size_t> indices) const;

  /// Copy of the points whose `keep` flag is nonzero.
  PointCloud filter(std::span<const std::uint8_t> keep) const;

  bool operator==(const PointCloud &) const = default;

private:
  std::vector<Point> points_;
  std::optional<std::vector<Label>> labels_;
};

/// Yaw-rotated cuboid. `size` is (length, width, height); length runs along
/// the heading.
struct BoundingBox
{
  Vec3 center = Vec3::Zero();
  Vec3 size = Vec3::Ones();
  double yaw = 0.0;

  BoundingBox() = default;
  BoundingBox(const Vec3 & center, const Vec3 & size, double yaw);

  Vec3 half_extents() const { return 0.5 * size; }

  /// Maps a sensor-frame point into the box frame (origin at center, +x along
  /// heading).
  Vec3 to_box_frame(const Vec3 & p) const;
  Vec3 from_box_frame(const Vec3 & q) const;
};

struct Pose2_5D
{
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Pose2_5D() = default;
  Pose2_5D(double x, double y, double yaw);
};

/// Which dataset labels count as ground and as removable foreground.
/// Defaults follow nuScenes-lidarseg: driveable surface, other flat, sidewalk
/// and terrain are ground; car is the vehicle class.
struct SemanticClassSets
{
  std::set<int> ground_ids{24, 25, 26, 27};
  std::set<int> vehicle_ids{17};

  bool is_ground(int label) const { return ground_ids.count(label) != 0; }
  bool is_vehicle(int label) const { return vehicle_ids.count(label) != 0; }
  void validate() const;
};

/// Category name to class id used for labeling inserted and simulated
/// objects (nuScenes-lidarseg ids). Unknown categories map to `fallback`.
struct CategoryLabels
{
  std::map<std::string, Label> ids{
    {"car", 17}, {"bus", 16}, {"truck", 23}, {"trailer", 22},
    {"motorcycle", 21}, {"bicycle", 14}, {"pedestrian", 2}};
  Label fallback = 0;

  Label of(const std::string & category) const;
};

/// Rotation about +z by `yaw`, then translation: p' = R(yaw) p + t.
PointCloud transform_cloud(const PointCloud & cloud, const Vec3 & translation, double yaw);

Vec3 rotate_z(const Vec3 & p, double yaw);

/// True iff `p`, in the box frame, is within half-extents + margin on every
/// axis (boundary inclusive).
bool box_contains(const BoundingBox & box, const Vec3 & p, double margin);
inline bool box_contains(const BoundingBox & box, const Point & p, double margin)
{
  return box_contains(box, p.position(), margin);
}

/// Distance along the unit ray `origin + t * dir` at which it enters the
/// cuboid, via the slab method in the box frame. Empty if the ray misses or
/// starts inside the box.
std::optional<double> ray_box_entry(const Vec3 & origin, const Vec3 & dir, const BoundingBox & box);

}  // namespace scanedit

#endif  // SCANEDIT__TYPES_HPP_
