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

#include "scanedit/types.hpp"

#include "scanedit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scanedit
{

std::string_view error_code_name(ErrorCode code)
{
  switch (code) {
    case ErrorCode::kMalformedScan: return "MalformedScan";
    case ErrorCode::kLabelLengthMismatch: return "LabelLengthMismatch";
    case ErrorCode::kMalformedBoxLine: return "MalformedBoxLine";
    case ErrorCode::kMalformedScene: return "MalformedScene";
    case ErrorCode::kMalformedArchive: return "MalformedArchive";
    case ErrorCode::kMalformedGridDump: return "MalformedGridDump";
    case ErrorCode::kOriginPoint: return "OriginPoint";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyObject: return "EmptyObject";
    case ErrorCode::kNoDonorSector: return "NoDonorSector";
    case ErrorCode::kInsufficientGroundContext: return "InsufficientGroundContext";
    case ErrorCode::kNoObjectFreeSector: return "NoObjectFreeSector";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kEmptyCategory: return "EmptyCategory";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kNoGroundPoints: return "NoGroundPoints";
    case ErrorCode::kObjectOutOfGrid: return "ObjectOutOfGrid";
    case ErrorCode::kUnnormalizedInput: return "UnnormalizedInput";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kEmptyCloud: return "EmptyCloud";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

double normalize_yaw(double yaw)
{
  double wrapped = std::fmod(yaw + kPi, 2.0 * kPi);
  if (wrapped < 0.0) {
    wrapped += 2.0 * kPi;
  }
  wrapped -= kPi;
  // fmod rounding can land exactly on +pi
  if (wrapped >= kPi) {
    wrapped -= 2.0 * kPi;
  }
  return wrapped;
}

bool Point::finite() const
{
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

PointCloud::PointCloud(std::vector<Point> points, std::vector<Label> labels)
: points_(std::move(points))
{
  set_labels(std::move(labels));
}

const std::vector<Label> & PointCloud::labels() const
{
  if (!labels_) {
    throw Error(ErrorCode::kInvalidArgument, "point cloud has no labels");
  }
  return *labels_;
}

void PointCloud::set_labels(std::vector<Label> labels)
{
  if (labels.size() != points_.size()) {
    throw Error(
      ErrorCode::kLabelLengthMismatch, "label count " + std::to_string(labels.size()) +
      " does not match point count " + std::to_string(points_.size()));
  }
  labels_ = std::move(labels);
}

void PointCloud::push_back(const Point & p, Label label)
{
  points_.push_back(p);
  if (labels_) {
    labels_->push_back(label);
  }
}

void PointCloud::reserve(std::size_t n)
{
  points_.reserve(n);
  if (labels_) {
    labels_->reserve(n);
  }
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const
{
  PointCloud out;
  out.points_.reserve(indices.size());
  if (labels_) {
    out.labels_.emplace();
    out.labels_->reserve(indices.size());
  }
  for (const std::size_t i : indices) {
    out.push_back(points_[i], labels_ ? (*labels_)[i] : Label{0});
  }
  return out;
}

PointCloud PointCloud::filter(std::span<const std::uint8_t> keep) const
{
  PointCloud out;
  if (labels_) {
    out.labels_.emplace();
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (keep[i]) {
      out.push_back(points_[i], labels_ ? (*labels_)[i] : Label{0});
    }
  }
  return out;
}

BoundingBox::BoundingBox(const Vec3 & c, const Vec3 & s, double y)
: center(c), size(s), yaw(normalize_yaw(y))
{
  if (!(s.x() > 0.0 && s.y() > 0.0 && s.z() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bounding box dimensions must be positive");
  }
}

Vec3 BoundingBox::to_box_frame(const Vec3 & p) const
{
  return rotate_z(p - center, -yaw);
}

Vec3 BoundingBox::from_box_frame(const Vec3 & q) const
{
  return rotate_z(q, yaw) + center;
}

Pose2_5D::Pose2_5D(double px, double py, double pyaw)
: x(px), y(py), yaw(normalize_yaw(pyaw))
{
}

void SemanticClassSets::validate() const
{
  for (const int id : ground_ids) {
    if (vehicle_ids.count(id) != 0) {
      throw Error(
        ErrorCode::kInvalidArgument,
        "class id " + std::to_string(id) + " is both ground and vehicle");
    }
  }
}

Label CategoryLabels::of(const std::string & category) const
{
  const auto it = ids.find(category);
  return it == ids.end() ? fallback : it->second;
}

Vec3 rotate_z(const Vec3 & p, double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * p.x() - s * p.y(), s * p.x() + c * p.y(), p.z()};
}

PointCloud transform_cloud(const PointCloud & cloud, const Vec3 & translation, double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  PointCloud out = cloud;
  for (Point & p : out.points()) {
    const double x = c * p.x - s * p.y + translation.x();
    const double y = s * p.x + c * p.y + translation.y();
    p.x = x;
    p.y = y;
    p.z += translation.z();
  }
  return out;
}

bool box_contains(const BoundingBox & box, const Vec3 & p, double margin)
{
  const Vec3 q = box.to_box_frame(p);
  const Vec3 half = box.half_extents();
  return std::abs(q.x()) <= half.x() + margin && std::abs(q.y()) <= half.y() + margin &&
         std::abs(q.z()) <= half.z() + margin;
}

std::optional<double> ray_box_entry(const Vec3 & origin, const Vec3 & dir, const BoundingBox & box)
{
  const Vec3 o = box.to_box_frame(origin);
  const Vec3 d = rotate_z(dir, -box.yaw);
  const Vec3 half = box.half_extents();

  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < -half[axis] || o[axis] > half[axis]) {
        return std::nullopt;
      }
      continue;
    }
    double t0 = (-half[axis] - o[axis]) / d[axis];
    double t1 = (half[axis] - o[axis]) / d[axis];
    if (t0 > t1) {
      std::swap(t0, t1);
    }
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) {
      return std::nullopt;
    }
  }
  if (t_near <= 0.0) {
    return std::nullopt;
  }
  return t_near;
}

}  // namespace scanedit
