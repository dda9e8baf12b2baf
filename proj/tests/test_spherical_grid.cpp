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
#include "scanedit/rng.hpp"
#include "scanedit/spherical_grid.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace scanedit;

TEST_CASE("to_spherical")
{
  SphericalCoord s = to_spherical(Vec3(10, 0, 0));
  CHECK(s.r == 10.0);
  CHECK(s.theta == 0.0);
  CHECK(s.phi == doctest::Approx(90.0));

  s = to_spherical(Vec3(0, 5, 0));
  CHECK(s.r == 5.0);
  CHECK(s.theta == doctest::Approx(90.0));
  CHECK(s.phi == doctest::Approx(90.0));

  s = to_spherical(Vec3(1, 0, 10));
  CHECK(s.r == doctest::Approx(10.0499));
  CHECK(s.theta == 0.0);
  CHECK(s.phi == doctest::Approx(5.711).epsilon(1e-4));

  s = to_spherical(Vec3(0, -1, 0));
  CHECK(s.theta == doctest::Approx(270.0));
  s = to_spherical(Vec3(1, -1e-300, 0));
  CHECK(s.theta >= 0.0);
  CHECK(s.theta < 360.0);

  try {
    to_spherical(Vec3::Zero());
    FAIL("expected OriginPoint");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::kOriginPoint);
  }
}

TEST_CASE("voxel_of with the default grid")
{
  const GridConfig cfg;
  auto v = voxel_of(SphericalCoord{10, 0, 90}, cfg);
  REQUIRE(v);
  CHECK(*v == VoxelIndex{102, 0, 8});

  v = voxel_of(SphericalCoord{25, 180, 100.15}, cfg);
  REQUIRE(v);
  CHECK(*v == VoxelIndex{256, 256, 16});

  CHECK_FALSE(voxel_of(SphericalCoord{60, 0, 90}, cfg));
  CHECK_FALSE(voxel_of(SphericalCoord{50, 0, 90}, cfg));
  CHECK_FALSE(voxel_of(SphericalCoord{10, 0, 121}, cfg));
  CHECK_FALSE(voxel_of(SphericalCoord{10, 0, 79.2}, cfg));
  CHECK(voxel_of(SphericalCoord{10, 0, 79.3}, cfg));
  CHECK(voxel_of(SphericalCoord{0, 0, 90}, cfg)->ir == 0);
  CHECK(voxel_of(SphericalCoord{10, 359.9999999, 90}, cfg)->itheta == 511);
  CHECK_FALSE(voxel_of(Vec3(Vec3::Zero()), cfg));
}

TEST_CASE("voxel_center")
{
  const GridConfig cfg;
  SphericalCoord s = voxel_center_spherical(VoxelIndex{102, 0, 8}, cfg);
  CHECK(s.r == doctest::Approx(10.009765625));
  CHECK(s.theta == doctest::Approx(0.3515625));
  CHECK(s.phi == doctest::Approx(90.3765625));

  s = voxel_center_spherical(VoxelIndex{0, 0, 0}, cfg);
  CHECK(s.r == doctest::Approx(0.048828125));
  CHECK(s.theta == doctest::Approx(0.3515625));
  CHECK(s.phi == doctest::Approx(79.9515625));

  const Point c = voxel_center(VoxelIndex{102, 0, 8}, cfg);
  CHECK(c.intensity == 0.0f);
  CHECK_FALSE(c.ring.has_value());
  CHECK(voxel_of(c.position(), cfg) == VoxelIndex{102, 0, 8});
}

TEST_CASE("voxel centers map to their own voxel on small grids")
{
  const GridConfig cfg{7, 9, 5, 13.0, 60.0, 130.0};
  for (int ir = 0; ir < cfg.n_r; ++ir) {
    for (int t = 0; t < cfg.n_theta; ++t) {
      for (int p = 0; p < cfg.n_phi; ++p) {
        const VoxelIndex v{ir, t, p};
        CHECK(voxel_of(voxel_center(v, cfg).position(), cfg) == v);
        CHECK(voxel_from_id(voxel_id(v, cfg), cfg) == v);
      }
    }
  }
}

TEST_CASE("grid config validation")
{
  CHECK_NOTHROW(GridConfig{}.validate());
  CHECK_THROWS_AS((GridConfig{0, 1, 1, 1.0, 0.0, 180.0}.validate()), Error);
  CHECK_THROWS_AS((GridConfig{1, 1, 1, 0.0, 0.0, 180.0}.validate()), Error);
  CHECK_THROWS_AS((GridConfig{1, 1, 1, 1.0, 90.0, 90.0}.validate()), Error);
  CHECK_THROWS_AS((GridConfig{1, 1, 1, 1.0, 0.0, 181.0}.validate()), Error);
}

TEST_CASE("voxelize")
{
  const GridConfig cfg;
  CHECK(voxelize(PointCloud{}, cfg).occupied.none());

  PointCloud two({Point::at(Vec3(10, 0.001, 0)), Point::at(Vec3(10.01, 0.002, 0.001)),
      Point::at(Vec3(70, 0, 0)), Point::at(Vec3(0, 0, 0))});
  const OccupancyGrid g = voxelize(two, cfg, {true});
  CHECK(g.occupied.count() == 1);
  CHECK(g.dropped == 2);
  REQUIRE(g.point_lists);
  CHECK(g.point_lists->size() == 1);
  CHECK(g.point_lists->begin()->second == std::vector<std::size_t>{0, 1});
  CHECK(g.point_voxels[2] == kNoVoxel);
  CHECK(g.point_voxels[3] == kNoVoxel);

  Rng rng(17);
  std::vector<Point> pts;
  std::set<VoxelIndex> distinct;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p = from_spherical(
      SphericalCoord{uniform(rng, 0.5, 20), uniform(rng, 0, 40), uniform(rng, 80, 120)});
    pts.push_back(Point::at(p));
    distinct.insert(*voxel_of(p, cfg));
  }
  const OccupancyGrid big = voxelize(PointCloud(pts), cfg);
  CHECK(big.occupied.count() == distinct.size());
  CHECK(big.occupied.count() <= 10000);
  CHECK(resample(big).size() <= pts.size());
}

TEST_CASE("resample order and content")
{
  const GridConfig cfg;
  CHECK(resample(VoxelVolume(cfg)).empty());
  VoxelVolume one(cfg);
  one.set(VoxelIndex{102, 0, 8});
  const PointCloud c = resample(one);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == voxel_center(VoxelIndex{102, 0, 8}, cfg));

  const GridConfig small{4, 3, 2, 4.0, 60.0, 120.0};
  VoxelVolume v(small);
  v.set(VoxelIndex{2, 0, 0});
  v.set(VoxelIndex{1, 2, 1});
  v.set(VoxelIndex{1, 0, 1});
  v.set(VoxelIndex{1, 0, 0});
  const auto idx = v.indices();
  CHECK(idx == std::vector<VoxelIndex>{{1, 0, 0}, {1, 0, 1}, {1, 2, 1}, {2, 0, 0}});
  const PointCloud r = resample(v);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    CHECK(r[i] == voxel_center(idx[i], small));
  }
}

TEST_CASE("occlusion mask and resolution")
{
  const GridConfig cfg;
  CHECK(occlusion_mask(VoxelVolume(cfg)).none());

  VoxelVolume occ(cfg);
  occ.set(VoxelIndex{10, 5, 3});
  VoxelMask expected(cfg);
  for (int ir = 11; ir < cfg.n_r; ++ir) {
    expected.set(VoxelIndex{ir, 5, 3});
  }
  CHECK(occlusion_mask(occ) == expected);

  occ.set(VoxelIndex{40, 5, 3});
  const VoxelMask mask = occlusion_mask(occ);
  CHECK(mask == expected);
  CHECK(mask.test(VoxelIndex{40, 5, 3}));

  const VoxelVolume resolved = resolve_occlusion(occ);
  CHECK(resolved.count() == 1);
  CHECK(resolved.test(VoxelIndex{10, 5, 3}));
  CHECK(resolve_occlusion(resolved) == resolved);

  OccupancyGrid g(cfg);
  g.occupied = occ;
  const OccupancyGrid rg = resolve_occlusion(g);
  CHECK(rg.occupied == resolved);
}

TEST_CASE("voxel volume words never straddle rays")
{
  const GridConfig cfg{70, 3, 2, 7.0, 60.0, 120.0};
  VoxelVolume v(cfg);
  CHECK(v.words_per_ray() == 2);
  v.set_range(1, 0, 70);
  CHECK(v.count_in_ray(1) == 70);
  CHECK(v.count() == 70);
  CHECK_FALSE(v.ray_any(0));
  CHECK_FALSE(v.ray_any(2));
  CHECK(v.first_in_ray(1) == 0);
  v.clear_ray(1);
  CHECK(v.none());
  v.set_range(4, 65, 70);
  CHECK(v.first_in_ray(4) == 65);
  CHECK(v.count_in_ray(4) == 5);
}

TEST_CASE("volume set algebra")
{
  const GridConfig cfg{8, 8, 4, 8.0, 60.0, 120.0};
  VoxelVolume a(cfg);
  VoxelVolume b(cfg);
  a.set(VoxelIndex{1, 2, 3});
  a.set(VoxelIndex{5, 2, 3});
  b.set(VoxelIndex{5, 2, 3});
  CHECK(b.is_subset_of(a));
  CHECK_FALSE(a.is_subset_of(b));
  CHECK(a.intersects(b));
  VoxelVolume d = a;
  d.subtract(b);
  CHECK(d.count() == 1);
  CHECK_FALSE(d.intersects(b));
  d |= b;
  CHECK(d == a);
  d &= b;
  CHECK(d == b);
  CHECK_THROWS_AS(a |= VoxelVolume(GridConfig{}), Error);
}

TEST_CASE("grid dump round trip")
{
  const GridConfig cfg{16, 12, 4, 20.0, 70.0, 125.5};
  Rng rng(4);
  VoxelVolume v(cfg);
  for (int i = 0; i < 100; ++i) {
    v.set(
      VoxelIndex{static_cast<int>(uniform_index(rng, 16)), static_cast<int>(uniform_index(rng, 12)),
        static_cast<int>(uniform_index(rng, 4))});
  }
  v.set_range(7, 3, 16);
  const std::string text = write_grid_dump(v);
  const VoxelVolume back = read_grid_dump(text);
  CHECK(back.config() == cfg);
  CHECK(back == v);
  CHECK(write_grid_dump(back) == text);

  CHECK_THROWS_AS(read_grid_dump("nonsense"), Error);
  try {
    read_grid_dump("scanedit-voxels 1\nn_r 4\nn_theta 3\nn_phi 2\nr_max 4\nphi_min 60\nphi_max 120\nruns 1\n20 10\n");
    FAIL("expected MalformedGridDump");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::kMalformedGridDump);
  }
}
