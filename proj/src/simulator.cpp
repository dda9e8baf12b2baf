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

#include "scanedit/simulator.hpp"

#include "scanedit/error.hpp"
#include "scanedit/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace scanedit
{

void AnalyticScene::validate() const
{
  const double max_grade = std::tan(deg_to_rad(10.0));
  if (!(std::abs(ground.a) < max_grade) || !(std::abs(ground.b) < max_grade) ||
    !std::isfinite(ground.c))
  {
    throw Error(ErrorCode::kInvalidArgument, "ground grade must stay below 10 degrees");
  }
  for (const Wall & w : walls) {
    if (!(std::hypot(w.nx, w.ny) > 0.0) || !std::isfinite(w.d)) {
      throw Error(ErrorCode::kInvalidArgument, "wall normal must be nonzero");
    }
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const BoundingBox & box = objects[i].box;
    const Vec3 h = box.half_extents();
    for (const double sx : {-1.0, 1.0}) {
      for (const double sy : {-1.0, 1.0}) {
        const Vec3 corner = box.from_box_frame(Vec3(sx * h.x(), sy * h.y(), -h.z()));
        if (corner.z() < ground.z_at(corner.x(), corner.y()) - 1e-9) {
          throw Error(
            ErrorCode::kInvalidArgument, "object " + std::to_string(i) + " dips below the ground");
        }
      }
    }
  }
}

double ground_intersection(const SceneGround & ground, const Vec3 & dir)
{
  const double denom = dir.z() - ground.a * dir.x() - ground.b * dir.y();
  if (denom == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double t = ground.c / denom;
  return t > 0.0 ? t : std::numeric_limits<double>::infinity();
}

namespace
{

double wall_intersection(const Wall & wall, const Vec3 & dir)
{
  const double denom = wall.nx * dir.x() + wall.ny * dir.y();
  if (denom == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double t = wall.d / denom;
  return t > 0.0 ? t : std::numeric_limits<double>::infinity();
}

RaycastScan cast(
  const AnalyticScene & scene, const GridConfig & cfg, const RaycastOptions & options,
  std::ptrdiff_t skip_object)
{
  scene.validate();
  cfg.validate();
  const std::size_t n_rays = cfg.ray_count();
  std::vector<double> range(n_rays, std::numeric_limits<double>::infinity());
  std::vector<int> surface(n_rays, kSurfaceNone);
  std::vector<Vec3> dirs(n_rays);

  const auto n = static_cast<std::ptrdiff_t>(n_rays);
#pragma omp parallel for schedule(static) if (n >= 2048)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto ray = static_cast<std::size_t>(k);
    const int itheta = static_cast<int>(ray / static_cast<std::size_t>(cfg.n_phi));
    const int iphi = static_cast<int>(ray % static_cast<std::size_t>(cfg.n_phi));
    const Vec3 dir = ray_direction(itheta, iphi, cfg);
    dirs[ray] = dir;

    double best = ground_intersection(scene.ground, dir);
    int hit = std::isfinite(best) ? kSurfaceGround : kSurfaceNone;
    for (const Wall & w : scene.walls) {
      const double t = wall_intersection(w, dir);
      if (t < best) {
        best = t;
        hit = kSurfaceWall;
      }
    }
    for (std::size_t o = 0; o < scene.objects.size(); ++o) {
      if (static_cast<std::ptrdiff_t>(o) == skip_object) {
        continue;
      }
      const auto t = ray_box_entry(Vec3::Zero(), dir, scene.objects[o].box);
      if (t && *t < best) {
        best = *t;
        hit = static_cast<int>(o);
      }
    }
    if (hit == kSurfaceNone) {
      continue;
    }
    if (options.noise_sigma > 0.0) {
      Rng rng(derive_seed(options.seed, ray));
      best += options.noise_sigma * standard_normal(rng);
    }
    if (best > 0.0 && best < cfg.r_max) {
      range[ray] = best;
      surface[ray] = hit;
    }
  }

  RaycastScan scan;
  scan.cloud.set_labels({});
  for (std::size_t ray = 0; ray < n_rays; ++ray) {
    if (surface[ray] == kSurfaceNone) {
      continue;
    }
    Point p = Point::at(range[ray] * dirs[ray]);
    p.ring = static_cast<std::int32_t>(ray % static_cast<std::size_t>(cfg.n_phi));
    // Store the range the point actually has, so it round-trips exactly.
    range[ray] = p.position().norm();
    Label label = options.ground_label;
    if (surface[ray] == kSurfaceWall) {
      label = options.wall_label;
    } else if (surface[ray] >= 0) {
      label = options.category_labels.of(
        scene.objects[static_cast<std::size_t>(surface[ray])].category);
    }
    scan.cloud.push_back(p, label);
    scan.point_rays.push_back(ray);
    scan.point_surfaces.push_back(surface[ray]);
  }
  scan.hit_ranges = std::move(range);
  scan.ray_surfaces = std::move(surface);
  return scan;
}

}  // namespace

RaycastScan raycast_scan(
  const AnalyticScene & scene, const GridConfig & cfg, const RaycastOptions & options)
{
  return cast(scene, cfg, options, -1);
}

ScanPair paired_scans(
  const AnalyticScene & scene, std::size_t object, const GridConfig & cfg,
  const RaycastOptions & options)
{
  if (object >= scene.objects.size()) {
    throw Error(
      ErrorCode::kInvalidArgument, "object index " + std::to_string(object) + " out of range");
  }
  ScanPair pair{
    cast(scene, cfg, options, -1), cast(scene, cfg, options, static_cast<std::ptrdiff_t>(object)),
    {}};
  pair.revealed.set_labels({});
  for (std::size_t i = 0; i < pair.without.cloud.size(); ++i) {
    const std::size_t ray = pair.without.point_rays[i];
    if (pair.with.ray_surfaces[ray] == static_cast<int>(object)) {
      pair.revealed.push_back(pair.without.cloud[i], pair.without.cloud.label(i));
    }
  }
  return pair;
}

AnalyticScene read_scene_text(const std::string & text)
{
  AnalyticScene scene;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_ground = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::istringstream tokens(line);
    std::string head;
    if (!(tokens >> head) || head[0] == '#') {
      continue;
    }
    auto fail = [&](const std::string & why) {
        return Error(ErrorCode::kMalformedScene, "line " + std::to_string(line_no) + ": " + why, line_no);
      };
    if (head == "ground" || head == "wall") {
      double v[3];
      std::string extra;
      for (double & x : v) {
        std::string tok;
        if (!(tokens >> tok)) {
          throw fail("'" + head + "' needs three numbers");
        }
        char * end = nullptr;
        x = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || !std::isfinite(x)) {
          throw fail("bad number '" + tok + "'");
        }
      }
      if (tokens >> extra) {
        throw fail("trailing field '" + extra + "'");
      }
      if (head == "ground") {
        if (have_ground) {
          throw fail("duplicate ground line");
        }
        have_ground = true;
        scene.ground = {v[0], v[1], v[2]};
      } else {
        scene.walls.push_back({v[0], v[1], v[2]});
      }
      continue;
    }
    try {
      scene.objects.push_back(parse_box_line(line, line_no));
    } catch (const Error & e) {
      throw Error(ErrorCode::kMalformedScene, e.what(), line_no);
    }
  }
  try {
    scene.validate();
  } catch (const Error & e) {
    throw Error(ErrorCode::kMalformedScene, e.what());
  }
  return scene;
}

std::string write_scene_text(const AnalyticScene & scene)
{
  std::string out = "ground " + format_g9(scene.ground.a) + " " + format_g9(scene.ground.b) + " " +
    format_g9(scene.ground.c) + "\n";
  for (const Wall & w : scene.walls) {
    out += "wall " + format_g9(w.nx) + " " + format_g9(w.ny) + " " + format_g9(w.d) + "\n";
  }
  for (const LabeledBox & b : scene.objects) {
    out += format_box_line(b) + "\n";
  }
  return out;
}

}  // namespace scanedit
