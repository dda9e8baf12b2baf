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

#include "scanedit/error.hpp"
#include "scanedit/simulator.hpp"
#include "scanedit/spherical_grid.hpp"

#include "scenes.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace scanedit;

namespace
{

ErrorCode code_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

GridConfig coarse_grid()
{
  GridConfig cfg;
  cfg.n_r = 256;
  cfg.n_theta = 180;
  cfg.n_phi = 32;
  return cfg;
}

}  // namespace

TEST_CASE("ray intersections")
{
  const SceneGround plane{0.0, 0.0, -2.0};
  CHECK(std::isinf(ground_intersection(plane, Vec3(1, 0, 0))));
  CHECK(std::isinf(ground_intersection(plane, Vec3(0, 0, 1))));
  const Vec3 d = from_spherical({1.0, 0.0, 120.0});
  CHECK(d.z() == doctest::Approx(-0.5));
  CHECK(ground_intersection(plane, d) == doctest::Approx(4.0).epsilon(1e-12));

  const BoundingBox box(Vec3(10, 0, 0), Vec3(2, 2, 2), 0.0);
  const auto hit = ray_box_entry(Vec3::Zero(), Vec3(1, 0, 0), box);
  REQUIRE(hit);
  CHECK(*hit == doctest::Approx(9.0));
  CHECK_FALSE(ray_box_entry(Vec3::Zero(), Vec3(-1, 0, 0), box));
}

TEST_CASE("raycast examples")
{
  GridConfig cfg = coarse_grid();
  cfg.phi_min = 119.0;
  cfg.phi_max = 121.0;
  cfg.n_phi = 1;
  AnalyticScene scene;
  scene.ground.c = -2.0;
  const RaycastScan scan = raycast_scan(scene, cfg);
  REQUIRE(scan.cloud.size() == static_cast<std::size_t>(cfg.n_theta));
  for (std::size_t i = 0; i < scan.cloud.size(); ++i) {
    CHECK(scan.hit_ranges[i] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(scan.cloud[i].z == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(scan.cloud.label(i) == 24);
    CHECK(scan.cloud[i].ring == 0);
  }

  GridConfig horizontal = coarse_grid();
  horizontal.phi_min = 89.0;
  horizontal.phi_max = 91.0;
  horizontal.n_phi = 1;
  CHECK(raycast_scan(scene, horizontal).cloud.empty());

  AnalyticScene boxed;
  boxed.ground.c = -2.0;
  boxed.objects.push_back({BoundingBox(Vec3(10, 0, 0), Vec3(2, 2, 2), 0.0), "car"});
  const RaycastScan b = raycast_scan(boxed, horizontal);
  const Vec3 dir = ray_direction(0, 0, horizontal);
  CHECK(b.ray_surfaces[0] == 0);
  CHECK(b.hit_ranges[0] == doctest::Approx(9.0 / dir.x()).epsilon(1e-12));
  CHECK(b.cloud.label(0) == 17);
}

TEST_CASE("raycast invariants")
{
  const GridConfig cfg = coarse_grid();
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    AnalyticScene scene;
    scene.ground.a = uniform(rng, -0.05, 0.05);
    scene.ground.b = uniform(rng, -0.05, 0.05);
    scene.walls.push_back({std::cos(trial * 1.0), std::sin(trial * 1.0), 30.0});
    while (scene.objects.size() < 4) {
      const LabeledBox car = testing::random_car(rng, scene.ground, 6.0, 25.0);
      if (!testing::overlaps_any(car, scene.objects, 1.0)) {
        scene.objects.push_back(car);
      }
    }
    const RaycastScan scan = raycast_scan(scene, cfg);
    REQUIRE(scan.cloud.size() == scan.point_rays.size());
    REQUIRE(scan.cloud.size() == scan.point_surfaces.size());
    const OccupancyGrid g = voxelize(scan.cloud, cfg);
    CHECK(g.dropped == 0);
    CHECK(resolve_occlusion(g.occupied) == g.occupied);
    CHECK(g.occupied.count() == scan.cloud.size());
    for (std::size_t i = 0; i < scan.cloud.size(); ++i) {
      const SphericalCoord s = to_spherical(scan.cloud[i]);
      CHECK(std::abs(s.r - scan.hit_ranges[scan.point_rays[i]]) <= 1e-9);
      CHECK(ray_index(*voxel_of(s, cfg), cfg) == scan.point_rays[i]);
      CHECK(scan.ray_surfaces[scan.point_rays[i]] == scan.point_surfaces[i]);
      const Vec3 p = scan.cloud[i].position();
      const int surface = scan.point_surfaces[i];
      if (surface == kSurfaceGround) {
        CHECK(std::abs(p.z() - scene.ground.z_at(p.x(), p.y())) <= 1e-9);
      } else if (surface == kSurfaceWall) {
        CHECK(scan.cloud.label(i) == 28);
      } else {
        CHECK(box_contains(scene.objects[static_cast<std::size_t>(surface)].box, p, 1e-9));
      }
    }
  }
}

TEST_CASE("slab method agrees with a surface sampler")
{
  Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3 size(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0));
    const double r = uniform(rng, 4.0, 8.0);
    const double az = uniform(rng, -kPi, kPi);
    const BoundingBox box(
      Vec3(r * std::cos(az), r * std::sin(az), uniform(rng, -1, 1)), size, uniform(rng, -kPi, kPi));
    const Vec3 target = box.from_box_frame(
      Vec3(uniform(rng, -0.4, 0.4) * size.x(), uniform(rng, -0.4, 0.4) * size.y(), uniform(rng, -0.4, 0.4) * size.z()));
    const Vec3 dir = target.normalized();
    const auto hit = ray_box_entry(Vec3::Zero(), dir, box);
    REQUIRE(hit);
    const Vec3 p = *hit * dir;

    const LibraryObject faces = testing::cuboid_object("b", "box", size, 0.01);
    double best = std::numeric_limits<double>::infinity();
    for (const Point & q : faces.cloud.points()) {
      best = std::min(best, (box.from_box_frame(q.position()) - p).norm());
    }
    CHECK(best <= 0.02);
  }
}

TEST_CASE("paired scans")
{
  const GridConfig cfg = coarse_grid();
  const AnalyticScene empty;
  CHECK(code_of([&] {paired_scans(empty, 0, cfg);}) == ErrorCode::kInvalidArgument);

  Rng rng(23);
  const AnalyticScene scene = testing::random_flat_scene(rng, 3);
  const ScanPair pair = paired_scans(scene, 1, cfg);
  std::size_t object_rays = 0;
  for (const int s : pair.with.ray_surfaces) {
    object_rays += s == 1;
  }
  CHECK(object_rays > 0);
  CHECK(pair.revealed.size() <= object_rays);
  CHECK(pair.revealed.size() > 0);
  for (const Point & p : pair.revealed.points()) {
    CHECK(std::abs(p.z + 1.8) <= 1e-9);
  }
  for (std::size_t i = 0; i < pair.without.cloud.size(); ++i) {
    CHECK(pair.without.point_surfaces[i] != 1);
  }
}

TEST_CASE("ray noise is deterministic")
{
  const GridConfig cfg = coarse_grid();
  Rng rng(24);
  const AnalyticScene scene = testing::random_flat_scene(rng, 2);
  RaycastOptions noisy;
  noisy.noise_sigma = 0.02;
  noisy.seed = 9;
  const RaycastScan a = raycast_scan(scene, cfg, noisy);
  const RaycastScan b = raycast_scan(scene, cfg, noisy);
  CHECK(a.cloud == b.cloud);
  const RaycastScan clean = raycast_scan(scene, cfg);
  CHECK_FALSE(a.cloud == clean.cloud);
}

TEST_CASE("scene validation")
{
  AnalyticScene steep;
  steep.ground.a = 0.2;
  CHECK(code_of([&] {steep.validate();}) == ErrorCode::kInvalidArgument);
  AnalyticScene sunk;
  sunk.objects.push_back({BoundingBox(Vec3(10, 0, -1.8), Vec3(2, 2, 2), 0.0), "car"});
  CHECK(code_of([&] {sunk.validate();}) == ErrorCode::kInvalidArgument);
  AnalyticScene wall;
  wall.walls.push_back({0.0, 0.0, 5.0});
  CHECK(code_of([&] {wall.validate();}) == ErrorCode::kInvalidArgument);
}

TEST_CASE("scene text")
{
  Rng rng(25);
  AnalyticScene scene = testing::random_flat_scene(rng, 3);
  scene.ground = {0.01, -0.02, -1.7};
  for (auto & o : scene.objects) {
    o.box.center.z() += 0.5;
  }
  scene.walls.push_back({0.0, 1.0, -20.0});
  const std::string text = write_scene_text(scene);
  const AnalyticScene back = read_scene_text(text);
  CHECK(write_scene_text(back) == text);
  REQUIRE(back.objects.size() == 3);
  CHECK(back.walls.size() == 1);
  CHECK(back.ground.c == -1.7);

  CHECK(read_scene_text("").objects.empty());
  CHECK(read_scene_text("# comment\nground 0 0 -2\n").ground.c == -2.0);

  auto line_of = [](const std::string & t) -> std::size_t {
      try {
        read_scene_text(t);
      } catch (const Error & e) {
        CHECK(e.code() == ErrorCode::kMalformedScene);
        return e.line();
      }
      FAIL("expected MalformedScene");
      return 0;
    };
  CHECK(line_of("ground 0 0\n") == 1);
  CHECK(line_of("ground 0 0 -2\nground 0 0 -2\n") == 2);
  CHECK(line_of("ground 0 0 -2\nwall 1 0 x\n") == 2);
  CHECK(line_of("ground 0 0 -2 4\n") == 1);
  CHECK(line_of("ground 0 0 -2\n10 0 0 2 2\n") == 2);
  CHECK(code_of([] {read_scene_text("ground 0.5 0 -2\n");}) == ErrorCode::kMalformedScene);
}
