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

#ifndef SCANEDIT__INSERTION_HPP_
#define SCANEDIT__INSERTION_HPP_

#include "scanedit/error.hpp"
#include "scanedit/object_library.hpp"
#include "scanedit/removal.hpp"
#include "scanedit/scan_io.hpp"
#include "scanedit/spherical_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace scanedit
{

struct GroundHit
{
  std::size_t index = 0;
  double z = 0.0;
  double planar_distance = 0.0;
};

/// Nearest candidate point to (x, y) in the x-y plane; ties go to the smaller
/// index. Throws NoGroundPoints when no point is a candidate.
GroundHit nearest_ground_point(
  const PointCloud & cloud, double x, double y, std::span<const std::uint8_t> candidate);

/// Candidates are the points whose label is in `ground_ids`.
GroundHit nearest_ground_point(
  const PointCloud & cloud, double x, double y, const std::set<int> & ground_ids);

double ground_height_at(
  const PointCloud & cloud, double x, double y, const std::set<int> & ground_ids);

struct PlacedObject
{
  PointCloud cloud;
  BoundingBox box;
  GroundHit ground;
};

/// Rotates the canonical object by the pose yaw, moves it to (x, y) and sets
/// its height so the lowest point sits exactly on the nearest ground point.
PlacedObject place_object(
  const LibraryObject & object, const Pose2_5D & pose, const PointCloud & scene,
  std::span<const std::uint8_t> ground_candidate);
PlacedObject place_object(
  const LibraryObject & object, const Pose2_5D & pose, const PointCloud & scene,
  const SemanticClassSets & classes);

struct InsertionResult
{
  PointCloud cloud;
  /// Scene indices that survived, in output order; the inserted points follow.
  std::vector<std::size_t> kept_scene;
  std::size_t inserted = 0;
  /// Rays (theta-major ids) touched by the object.
  std::vector<std::size_t> touched_rays;
};

/// Resamples the posed object to voxel centers and resolves occlusion on
/// every ray the object touches: only the nearest occupied voxel of the
/// merged scene survives there. Other rays are left untouched. Throws
/// ObjectOutOfGrid.
InsertionResult insert_object(
  const PointCloud & scene, const PointCloud & object, const GridConfig & cfg,
  Label object_label = 0);

enum class Provenance : std::uint8_t
{
  kOriginal = 0,
  kInpainted = 1,
  kInserted = 2,
};

struct RemoveBox
{
  std::size_t box = 0;
};
struct RemoveCategory
{
  std::string category;
};
using Removal = std::variant<RemoveBox, RemoveCategory>;

struct ObjectById
{
  std::string id;
};
struct ObjectFromCategory
{
  std::string category;
};
using ObjectSource = std::variant<ObjectById, ObjectFromCategory>;

/// Pose of an original annotation, optionally perturbed.
struct PoseFromBox
{
  std::size_t box = 0;
  bool perturb = false;
};
using PoseSource = std::variant<Pose2_5D, PoseFromBox>;

struct Insertion
{
  ObjectSource object;
  PoseSource pose;
};

/// Target object layout: removals run first, in order, then insertions.
struct EditPlan
{
  std::vector<Removal> removals;
  std::vector<Insertion> insertions;
  std::uint64_t seed = 0;
  std::string inpainter = "tiling";
  PerturbOptions perturb;

  bool empty() const { return removals.empty() && insertions.empty(); }
};

struct EditOptions
{
  double margin = 0.1;
  Label inpainted_label = 0;
  SemanticClassSets classes;
  CategoryLabels category_labels;
  /// Let insertions rest on inpainted points as well as real ground.
  bool ground_from_inpainted = false;
  double bev_cell = 0.5;
};

struct InsertionReport
{
  std::string object_id;
  Pose2_5D pose;
  double ground_distance = 0.0;
  std::size_t points = 0;
};

struct StepTiming
{
  std::string step;
  double seconds = 0.0;
};

struct EditResult
{
  PointCloud cloud;
  std::vector<Provenance> provenance;
  std::vector<LabeledBox> inserted_boxes;
  /// Original annotations that were not removed.
  std::vector<LabeledBox> remaining_boxes;
  /// Rays touched by a removal mask or an insertion.
  std::vector<std::size_t> edited_rays;
  std::vector<InsertionReport> insertions;
  std::size_t removed_points = 0;
  std::size_t inpainted_points = 0;
  std::size_t inserted_points = 0;
  std::vector<StepTiming> timings;

  /// remaining_boxes followed by inserted_boxes.
  std::vector<LabeledBox> scene_boxes() const;
};

/// Error raised inside edit_scene, tagged with the failing step.
class EditError : public Error
{
public:
  EditError(const Error & cause, std::string step)
  : Error(cause.code(), step + ": " + cause.what(), cause.line()), step_(std::move(step))
  {
  }
  const std::string & step() const noexcept { return step_; }

private:
  std::string step_;
};

EditResult edit_scene(
  const ScanBundle & scan, const EditPlan & plan, const ObjectLibrary & library,
  const Inpainter & inpainter, const GridConfig & cfg, const EditOptions & options = {});

}  // namespace scanedit

#endif  // SCANEDIT__INSERTION_HPP_
