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

#ifndef SCANEDIT__OBJECT_LIBRARY_HPP_
#define SCANEDIT__OBJECT_LIBRARY_HPP_

#include "scanedit/rng.hpp"
#include "scanedit/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace scanedit
{

/// A completed object in its canonical frame: box center at the origin, yaw
/// removed, heading along +x.
struct LibraryObject
{
  std::string id;
  std::string category;
  PointCloud cloud;
  Vec3 dims = Vec3::Ones();
  std::string source_scan;
  bool completed = false;

  /// Throws InvalidArgument unless the cloud is nonempty and every point
  /// lies within dims / 2 + 0.1 m per axis.
  void validate() const;
};

/// Objects in insertion order, unique by id.
class ObjectLibrary
{
public:
  void add(LibraryObject object);

  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }
  const std::vector<LibraryObject> & objects() const { return objects_; }

  /// Throws UnknownObject.
  const LibraryObject & get(const std::string & id) const;
  bool contains(const std::string & id) const { return by_id_.count(id) != 0; }

  /// Indices into objects() for a category, in insertion order.
  const std::vector<std::size_t> & category(const std::string & name) const;
  std::vector<std::string> categories() const;

private:
  std::vector<LibraryObject> objects_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::vector<std::size_t>> by_category_;
};

struct ExtractOptions
{
  double margin = 0.1;
  std::size_t min_points = 10;
  /// When the scan is labeled, points whose label is not a vehicle id are
  /// left out (ground caught in the box).
  SemanticClassSets classes;
};

/// Points inside the box, moved into its canonical frame. Throws TooFewPoints.
PointCloud extract_object(
  const PointCloud & scan, const BoundingBox & box, const ExtractOptions & options = {});

/// Bilateral-symmetry completion: the input plus its mirror image across the
/// x-z plane. A mirrored point is dropped when an input point already lies
/// within 1 mm of it, which also makes the operation idempotent.
PointCloud mirror_complete(const PointCloud & canonical);

using CompletionFn = std::function<PointCloud(const PointCloud &)>;

/// Extracts and completes one annotated object.
LibraryObject build_library_object(
  const PointCloud & scan, const BoundingBox & box, const std::string & category,
  const std::string & id, const std::string & source_scan, const ExtractOptions & options = {},
  const CompletionFn & complete = mirror_complete);

/// Archive: `manifest.tsv` (id, category, l, w, h, source_scan, completed)
/// plus one scan-format `<id>.bin` per object.
void save_library(const ObjectLibrary & library, const std::filesystem::path & dir);
ObjectLibrary load_library(const std::filesystem::path & dir);

/// Uniform sampling within a category, reproducible under a seed.
class ObjectSampler
{
public:
  ObjectSampler(const ObjectLibrary & library, std::uint64_t seed)
  : library_(library), rng_(seed)
  {
  }

  /// Throws EmptyCategory.
  const LibraryObject & sample(const std::string & category);

private:
  const ObjectLibrary & library_;
  Rng rng_;
};

/// First draw of a fresh sampler with this seed.
const LibraryObject & sample_object(
  const ObjectLibrary & library, const std::string & category, std::uint64_t seed);

/// Boolean bird's-eye-view map on a regular x-y grid.
class BevMap
{
public:
  BevMap(double x_min, double y_min, double cell_size, int nx, int ny, bool fill = false);

  /// Marks the cell of every point whose `candidate` flag is set. The extent
  /// covers the flagged points.
  static BevMap from_points(
    const PointCloud & cloud, std::span<const std::uint8_t> candidate, double cell_size = 0.5);

  /// Cells of ground-labeled points.
  static BevMap ground_of(
    const PointCloud & cloud, const SemanticClassSets & classes, double cell_size = 0.5);

  /// False outside the map extent.
  bool at(double x, double y) const;
  void set(double x, double y);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double cell_size() const { return cell_; }

private:
  double x_min_;
  double y_min_;
  double cell_;
  int nx_;
  int ny_;
  std::vector<std::uint8_t> cells_;
};

struct PerturbOptions
{
  double max_translation = 2.5;
  double max_yaw = deg_to_rad(45.0);
  int max_attempts = 100;
};

/// Random offset with |(dx, dy)| <= max_translation and |dyaw| <= max_yaw,
/// rejection-sampled until the new (x, y) lands on a ground cell. Returns the
/// unperturbed pose when every attempt fails.
Pose2_5D perturb_pose(
  const Pose2_5D & pose, std::uint64_t seed, const BevMap & ground_bev,
  const PerturbOptions & options = {});

}  // namespace scanedit

#endif  // SCANEDIT__OBJECT_LIBRARY_HPP_
