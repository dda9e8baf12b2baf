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

// Serial reference kernels against their OpenMP counterparts.
// The `threads` argument sets the OpenMP team size; reference kernels ignore it.

#include "scanedit/metrics.hpp"
#include "scanedit/reference.hpp"
#include "scanedit/removal.hpp"
#include "scanedit/rng.hpp"
#include "scanedit/simulator.hpp"
#include "scanedit/spherical_grid.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <thread>

using namespace scanedit;

namespace
{

struct Fixture
{
  GridConfig cfg;
  AnalyticScene scene;
  PointCloud cloud;
  VoxelVolume occupied{cfg};
  VoxelVolume object{cfg};
  reference::DenseGrid dense{cfg};
  reference::DenseGrid dense_object{cfg};
  PointCloud a;
  PointCloud b;

  Fixture()
  {
    scene.walls = {{1, 0, 30}, {1, 0, -30}, {0, 1, 30}, {0, 1, -30}};
    Rng rng(7);
    for (int i = 0; i < 8; ++i) {
      const double r = uniform(rng, 6, 22);
      const double az = i * kPi / 4;
      scene.objects.push_back(
        {BoundingBox(Vec3(r * std::cos(az), r * std::sin(az), -1.8 + 0.2 + 0.8), Vec3(4.4, 1.9, 1.6), az), "car"});
    }
    GridConfig sensor;
    sensor.n_theta = 1084;
    cloud = raycast_scan(scene, sensor).cloud;
    occupied = voxelize(cloud, cfg).occupied;
    dense = reference::DenseGrid::from_volume(occupied);
    for (const auto & v : object_voxels_of(cloud, scene.objects[0].box, 0.1, cfg)) {
      object.set(v);
    }
    dense_object = reference::DenseGrid::from_volume(object);
    for (int i = 0; i < 20000; ++i) {
      a.push_back(Point::at(Vec3(uniform(rng, -30, 30), uniform(rng, -30, 30), uniform(rng, -2, 2))));
      b.push_back(Point::at(Vec3(uniform(rng, -30, 30), uniform(rng, -30, 30), uniform(rng, -2, 2))));
    }
  }
};

const Fixture & fixture()
{
  static const Fixture f;
  return f;
}

void threads_arg(benchmark::internal::Benchmark * b)
{
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (int t = 1; t <= hw; t *= 2) {
    b->Arg(t);
  }
  if ((hw & (hw - 1)) != 0) {
    b->Arg(hw);
  }
  b->UseRealTime();
}

void BM_voxelize_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::voxelize(f.cloud, f.cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cloud.size()));
}
BENCHMARK(BM_voxelize_reference)->UseRealTime();

void BM_voxelize_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(voxelize(f.cloud, f.cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.cloud.size()));
}
BENCHMARK(BM_voxelize_openmp)->Apply(threads_arg);

void BM_resolve_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::resolve_occlusion(f.dense));
  }
}
BENCHMARK(BM_resolve_reference)->UseRealTime();

void BM_resolve_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolve_occlusion(f.occupied));
  }
}
BENCHMARK(BM_resolve_openmp)->Apply(threads_arg);

void BM_occlusion_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::occlusion_mask(f.dense));
  }
}
BENCHMARK(BM_occlusion_reference)->UseRealTime();

void BM_occlusion_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(occlusion_mask(f.occupied));
  }
}
BENCHMARK(BM_occlusion_openmp)->Apply(threads_arg);

void BM_deocclusion_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::deocclusion_mask(f.dense_object));
  }
}
BENCHMARK(BM_deocclusion_reference)->UseRealTime();

void BM_deocclusion_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(deocclusion_mask(f.object));
  }
}
BENCHMARK(BM_deocclusion_openmp)->Apply(threads_arg);

void BM_resample_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::resample(f.dense));
  }
}
BENCHMARK(BM_resample_reference)->UseRealTime();

void BM_resample_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(resample(f.occupied));
  }
}
BENCHMARK(BM_resample_openmp)->Apply(threads_arg);

void BM_bev_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::bev_histogram(f.dense));
  }
}
BENCHMARK(BM_bev_reference)->UseRealTime();

void BM_bev_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bev_histogram(f.occupied));
  }
}
BENCHMARK(BM_bev_openmp)->Apply(threads_arg);

void BM_chamfer_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  PointCloud small_a, small_b;
  for (std::size_t i = 0; i < 2000; ++i) {
    small_a.push_back(f.a[i]);
    small_b.push_back(f.b[i]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::chamfer(small_a, small_b));
  }
}
BENCHMARK(BM_chamfer_reference)->UseRealTime();

void BM_chamfer_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  PointCloud small_a, small_b;
  for (std::size_t i = 0; i < 2000; ++i) {
    small_a.push_back(f.a[i]);
    small_b.push_back(f.b[i]);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(chamfer(small_a, small_b));
  }
}
BENCHMARK(BM_chamfer_openmp)->Apply(threads_arg);

void BM_chamfer_openmp_20k(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(chamfer(f.a, f.b));
  }
}
BENCHMARK(BM_chamfer_openmp_20k)->Apply(threads_arg);

void BM_raycast_reference(benchmark::State & state)
{
  const Fixture & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::raycast_ranges(f.scene, f.cfg));
  }
}
BENCHMARK(BM_raycast_reference)->UseRealTime();

void BM_raycast_openmp(benchmark::State & state)
{
  const Fixture & f = fixture();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(raycast_scan(f.scene, f.cfg));
  }
}
BENCHMARK(BM_raycast_openmp)->Apply(threads_arg);

}  // namespace

BENCHMARK_MAIN();
