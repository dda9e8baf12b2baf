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

#include "scanedit/insertion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace scanedit
{

GroundHit nearest_ground_point(
  const PointCloud & cloud, double x, double y, std::span<const std::uint8_t> candidate)
{
  bool found = false;
  GroundHit best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!candidate[i]) {
      continue;
    }
    const double dx = cloud[i].x - x;
    const double dy = cloud[i].y - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
      best_d2 = d2;
      best.index = i;
      found = true;
    }
  }
  if (!found) {
    throw Error(ErrorCode::kNoGroundPoints, "scan has no ground points to rest the object on");
  }
  best.z = cloud[best.index].z;
  best.planar_distance = std::sqrt(best_d2);
  return best;
}

GroundHit nearest_ground_point(
  const PointCloud & cloud, double x, double y, const std::set<int> & ground_ids)
{
  std::vector<std::uint8_t> candidate(cloud.size(), 0);
  if (cloud.has_labels()) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      candidate[i] = ground_ids.count(cloud.label(i)) != 0;
    }
  }
  return nearest_ground_point(cloud, x, y, candidate);
}

double ground_height_at(
  const PointCloud & cloud, double x, double y, const std::set<int> & ground_ids)
{
  return nearest_ground_point(cloud, x, y, ground_ids).z;
}

PlacedObject place_object(
  const LibraryObject & object, const Pose2_5D & pose, const PointCloud & scene,
  std::span<const std::uint8_t> ground_candidate)
{
  if (object.cloud.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "library object '" + object.id + "' is empty");
  }
  const GroundHit ground = nearest_ground_point(scene, pose.x, pose.y, ground_candidate);

  double min_z = std::numeric_limits<double>::infinity();
  for (const Point & p : object.cloud.points()) {
    min_z = std::min(min_z, p.z);
  }

  // (z - min_z) + ground gives exactly ground.z for the lowest point.
  const double c = std::cos(pose.yaw);
  const double s = std::sin(pose.yaw);
  PlacedObject placed;
  placed.ground = ground;
  std::vector<Point> points;
  points.reserve(object.cloud.size());
  for (const Point & p : object.cloud.points()) {
    Point q = p;
    q.x = c * p.x - s * p.y + pose.x;
    q.y = s * p.x + c * p.y + pose.y;
    q.z = (p.z - min_z) + ground.z;
    points.push_back(q);
  }
  placed.cloud = PointCloud(std::move(points));
  placed.box = BoundingBox(
    Vec3(pose.x, pose.y, ground.z + 0.5 * object.dims.z()), object.dims, pose.yaw);
  return placed;
}

PlacedObject place_object(
  const LibraryObject & object, const Pose2_5D & pose, const PointCloud & scene,
  const SemanticClassSets & classes)
{
  std::vector<std::uint8_t> candidate(scene.size(), 0);
  if (scene.has_labels()) {
    for (std::size_t i = 0; i < scene.size(); ++i) {
      candidate[i] = classes.is_ground(scene.label(i));
    }
  }
  return place_object(object, pose, scene, candidate);
}

InsertionResult insert_object(
  const PointCloud & scene, const PointCloud & object, const GridConfig & cfg, Label object_label)
{
  cfg.validate();
  const OccupancyGrid object_grid = voxelize(object, cfg);
  if (object_grid.occupied.none()) {
    throw Error(ErrorCode::kObjectOutOfGrid, "no point of the inserted object is inside the grid");
  }
  const OccupancyGrid scene_grid = voxelize(scene, cfg);

  VoxelVolume merged = scene_grid.occupied;
  merged |= object_grid.occupied;

  InsertionResult result;
  result.touched_rays = occupied_rays(object_grid.occupied);
  std::vector<int> survivor(cfg.ray_count(), -1);
  for (const std::size_t ray : result.touched_rays) {
    survivor[ray] = merged.first_in_ray(ray);
  }

  const auto n = static_cast<std::ptrdiff_t>(scene.size());
  const auto n_r = static_cast<std::size_t>(cfg.n_r);
  std::vector<std::uint8_t> keep(scene.size(), 1);
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const VoxelId id = scene_grid.point_voxels[i];
    if (id != kNoVoxel) {
      const int s = survivor[id / n_r];
      keep[i] = s < 0 || static_cast<int>(id % n_r) == s;
      continue;
    }
    // Beyond r_max on a touched ray: the object is in front of it.
    const Point & p = scene[i];
    if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) {
      continue;
    }
    const SphericalCoord sc = to_spherical(p);
    if (sc.r >= cfg.r_max) {
      if (const auto ray = ray_of(sc, cfg); ray && survivor[*ray] >= 0) {
        keep[i] = 0;
      }
    }
  }

  result.cloud = PointCloud{};
  if (scene.has_labels()) {
    result.cloud.set_labels({});
  }
  for (std::size_t i = 0; i < scene.size(); ++i) {
    if (keep[i]) {
      result.kept_scene.push_back(i);
      result.cloud.push_back(scene[i], scene.has_labels() ? scene.label(i) : Label{0});
    }
  }
  for (const VoxelIndex & v : object_grid.occupied.indices()) {
    if (survivor[ray_index(v, cfg)] == v.ir) {
      result.cloud.push_back(voxel_center(v, cfg), object_label);
      ++result.inserted;
    }
  }
  return result;
}

std::vector<LabeledBox> EditResult::scene_boxes() const
{
  std::vector<LabeledBox> boxes = remaining_boxes;
  boxes.insert(boxes.end(), inserted_boxes.begin(), inserted_boxes.end());
  return boxes;
}

namespace
{

template<class... Ts>
struct overloaded : Ts ... { using Ts::operator() ...; };
template<class... Ts>
overloaded(Ts...)->overloaded<Ts...>;

struct RemovalStep
{
  std::size_t box;
  bool from_category;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void mark_rays(std::vector<std::uint8_t> & edited, std::span<const std::size_t> rays)
{
  for (const std::size_t r : rays) {
    edited[r] = 1;
  }
}

}  // namespace

EditResult edit_scene(
  const ScanBundle & scan, const EditPlan & plan, const ObjectLibrary & library,
  const Inpainter & inpainter, const GridConfig & cfg, const EditOptions & options)
{
  cfg.validate();
  const std::size_t n_boxes = scan.boxes.size();

  // Resolve references up front so a bad plan fails before any work.
  std::vector<RemovalStep> removal_steps;
  std::vector<std::uint8_t> scheduled(n_boxes, 0);
  for (std::size_t k = 0; k < plan.removals.size(); ++k) {
    std::visit(
      overloaded{
        [&](const RemoveBox & r) {
          if (r.box >= n_boxes) {
            throw EditError(
              Error(ErrorCode::kInvalidArgument, "box index " + std::to_string(r.box) +
              " out of range (scan has " + std::to_string(n_boxes) + ")"),
              "plan removal " + std::to_string(k));
          }
          if (!scheduled[r.box]) {
            scheduled[r.box] = 1;
            removal_steps.push_back({r.box, false});
          }
        },
        [&](const RemoveCategory & r) {
          for (std::size_t b = 0; b < n_boxes; ++b) {
            if (scan.boxes[b].category == r.category && !scheduled[b]) {
              scheduled[b] = 1;
              removal_steps.push_back({b, true});
            }
          }
        }},
      plan.removals[k]);
  }
  for (std::size_t k = 0; k < plan.insertions.size(); ++k) {
    const std::string step = "plan insertion " + std::to_string(k);
    if (const auto * by_id = std::get_if<ObjectById>(&plan.insertions[k].object)) {
      if (!library.contains(by_id->id)) {
        throw EditError(Error(ErrorCode::kUnknownObject, "library has no object '" + by_id->id + "'"), step);
      }
    }
    if (const auto * from_box = std::get_if<PoseFromBox>(&plan.insertions[k].pose)) {
      if (from_box->box >= n_boxes) {
        throw EditError(
          Error(ErrorCode::kInvalidArgument, "pose box index " + std::to_string(from_box->box) +
          " out of range"), step);
      }
    }
  }

  EditResult result;
  PointCloud cloud = scan.cloud;
  std::vector<Provenance> prov(cloud.size(), Provenance::kOriginal);
  std::vector<std::uint8_t> alive(n_boxes, 1);
  std::vector<std::uint8_t> edited(cfg.ray_count(), 0);

  for (std::size_t k = 0; k < removal_steps.size(); ++k) {
    const std::size_t b = removal_steps[k].box;
    const auto start = std::chrono::steady_clock::now();
    std::vector<BoundingBox> others;
    for (std::size_t j = 0; j < n_boxes; ++j) {
      if (alive[j] && j != b) {
        others.push_back(scan.boxes[j].box);
      }
    }
    RemovalOptions ropts;
    ropts.margin = options.margin;
    ropts.inpainted_label = options.inpainted_label;
    ropts.other_objects = others;
    ropts.classes = options.classes;

    RemovalResult removed{PointCloud{}, VoxelMask(cfg), {}, 0, 0, 0};
    try {
      removed = remove_object(cloud, scan.boxes[b].box, inpainter, cfg, ropts);
    } catch (const Error & e) {
      // Annotations with no returns are common in real data; removing "all
      // of a category" just drops their labels.
      if (e.code() == ErrorCode::kEmptyObject && removal_steps[k].from_category) {
        alive[b] = 0;
        continue;
      }
      throw EditError(e, "removal " + std::to_string(k) + " (box " + std::to_string(b) + ")");
    }

    std::vector<Provenance> next;
    next.reserve(removed.cloud.size());
    std::size_t d = 0;
    for (std::size_t i = 0; i < prov.size(); ++i) {
      if (d < removed.deleted_indices.size() && removed.deleted_indices[d] == i) {
        ++d;
        continue;
      }
      next.push_back(prov[i]);
    }
    next.resize(removed.cloud.size(), Provenance::kInpainted);
    prov = std::move(next);
    cloud = std::move(removed.cloud);
    result.removed_points += removed.deleted_indices.size();
    mark_rays(edited, occupied_rays(removed.mask));
    alive[b] = 0;
    result.timings.push_back({"removal " + std::to_string(k), seconds_since(start)});
  }

  ObjectSampler sampler(library, derive_seed(plan.seed, 0));
  for (std::size_t k = 0; k < plan.insertions.size(); ++k) {
    const Insertion & ins = plan.insertions[k];
    const std::string step = "insertion " + std::to_string(k);
    const auto start = std::chrono::steady_clock::now();
    try {
      const LibraryObject & object = std::visit(
        overloaded{
          [&](const ObjectById & o) -> const LibraryObject & {return library.get(o.id);},
          [&](const ObjectFromCategory & o) -> const LibraryObject & {
            return sampler.sample(o.category);
          }},
        ins.object);

      std::vector<std::uint8_t> candidate(cloud.size(), 0);
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (prov[i] == Provenance::kOriginal) {
          candidate[i] = cloud.has_labels() && options.classes.is_ground(cloud.label(i));
        } else if (prov[i] == Provenance::kInpainted) {
          candidate[i] = options.ground_from_inpainted;
        }
      }

      Pose2_5D pose;
      if (const auto * explicit_pose = std::get_if<Pose2_5D>(&ins.pose)) {
        pose = *explicit_pose;
      } else {
        const auto & from = std::get<PoseFromBox>(ins.pose);
        const BoundingBox & src = scan.boxes[from.box].box;
        pose = Pose2_5D(src.center.x(), src.center.y(), src.yaw);
        if (from.perturb) {
          const BevMap ground = BevMap::from_points(cloud, candidate, options.bev_cell);
          pose = perturb_pose(pose, derive_seed(plan.seed, 1 + k), ground, plan.perturb);
        }
      }

      const PlacedObject placed = place_object(object, pose, cloud, candidate);
      InsertionResult inserted = insert_object(
        cloud, placed.cloud, cfg, options.category_labels.of(object.category));

      std::vector<Provenance> next;
      next.reserve(inserted.cloud.size());
      for (const std::size_t i : inserted.kept_scene) {
        next.push_back(prov[i]);
      }
      next.resize(inserted.cloud.size(), Provenance::kInserted);
      prov = std::move(next);
      cloud = std::move(inserted.cloud);
      mark_rays(edited, inserted.touched_rays);
      result.inserted_boxes.push_back({placed.box, object.category});
      result.insertions.push_back({object.id, pose, placed.ground.planar_distance, inserted.inserted});
      result.timings.push_back({step, seconds_since(start)});
    } catch (const EditError &) {
      throw;
    } catch (const Error & e) {
      throw EditError(e, step);
    }
  }

  // Collapse every edited ray to its nearest occupied voxel.
  if (std::find(edited.begin(), edited.end(), 1) != edited.end()) {
    const auto start = std::chrono::steady_clock::now();
    const OccupancyGrid grid = voxelize(cloud, cfg);
    const auto n_r = static_cast<std::size_t>(cfg.n_r);
    std::vector<std::uint8_t> keep(cloud.size(), 1);
    const auto n = static_cast<std::ptrdiff_t>(cloud.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const VoxelId id = grid.point_voxels[static_cast<std::size_t>(k)];
      if (id == kNoVoxel) {
        continue;
      }
      const std::size_t ray = id / n_r;
      if (edited[ray]) {
        keep[static_cast<std::size_t>(k)] =
          static_cast<int>(id % n_r) == grid.occupied.first_in_ray(ray);
      }
    }
    std::vector<Provenance> next;
    for (std::size_t i = 0; i < keep.size(); ++i) {
      if (keep[i]) {
        next.push_back(prov[i]);
      }
    }
    cloud = cloud.filter(keep);
    prov = std::move(next);
    result.timings.push_back({"occlusion pass", seconds_since(start)});
  }

  for (std::size_t r = 0; r < edited.size(); ++r) {
    if (edited[r]) {
      result.edited_rays.push_back(r);
    }
  }
  for (std::size_t b = 0; b < n_boxes; ++b) {
    if (alive[b]) {
      result.remaining_boxes.push_back(scan.boxes[b]);
    }
  }
  for (const Provenance p : prov) {
    if (p == Provenance::kInpainted) {
      ++result.inpainted_points;
    } else if (p == Provenance::kInserted) {
      ++result.inserted_points;
    }
  }
  result.cloud = std::move(cloud);
  result.provenance = std::move(prov);
  return result;
}

}  // namespace scanedit
