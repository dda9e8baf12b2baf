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

#include "scanedit/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scanedit::reference
{

DenseGrid::DenseGrid(const GridConfig & cfg)
: config(cfg), cells(cfg.voxel_count(), 0)
{
}

std::uint8_t & DenseGrid::at(int ir, int itheta, int iphi)
{
  return cells[(static_cast<std::size_t>(ir) * static_cast<std::size_t>(config.n_theta) +
         static_cast<std::size_t>(itheta)) * static_cast<std::size_t>(config.n_phi) +
         static_cast<std::size_t>(iphi)];
}

std::uint8_t DenseGrid::at(int ir, int itheta, int iphi) const
{
  return cells[(static_cast<std::size_t>(ir) * static_cast<std::size_t>(config.n_theta) +
         static_cast<std::size_t>(itheta)) * static_cast<std::size_t>(config.n_phi) +
         static_cast<std::size_t>(iphi)];
}

DenseGrid DenseGrid::from_volume(const VoxelVolume & volume)
{
  DenseGrid g(volume.config());
  for (int ir = 0; ir < g.config.n_r; ++ir) {
    for (int t = 0; t < g.config.n_theta; ++t) {
      for (int p = 0; p < g.config.n_phi; ++p) {
        g.at(ir, t, p) = volume.test(VoxelIndex{ir, t, p});
      }
    }
  }
  return g;
}

VoxelVolume DenseGrid::to_volume() const
{
  VoxelVolume v(config);
  for (int ir = 0; ir < config.n_r; ++ir) {
    for (int t = 0; t < config.n_theta; ++t) {
      for (int p = 0; p < config.n_phi; ++p) {
        if (at(ir, t, p)) {
          v.set(VoxelIndex{ir, t, p});
        }
      }
    }
  }
  return v;
}

DenseGrid voxelize(const PointCloud & cloud, const GridConfig & cfg)
{
  DenseGrid g(cfg);
  for (const Point & p : cloud.points()) {
    if (const auto v = voxel_of(p.position(), cfg)) {
      g.at(v->ir, v->itheta, v->iphi) = 1;
    }
  }
  return g;
}

namespace
{

// Walks every ray outward; `f(seen_before, occupied)` decides each output cell.
template<class F>
DenseGrid per_ray(const DenseGrid & in, F f)
{
  const GridConfig & cfg = in.config;
  DenseGrid out(cfg);
  for (int t = 0; t < cfg.n_theta; ++t) {
    for (int p = 0; p < cfg.n_phi; ++p) {
      bool seen = false;
      for (int ir = 0; ir < cfg.n_r; ++ir) {
        const bool occ = in.at(ir, t, p) != 0;
        out.at(ir, t, p) = f(seen, occ);
        seen = seen || occ;
      }
    }
  }
  return out;
}

}  // namespace

DenseGrid occlusion_mask(const DenseGrid & occupied)
{
  return per_ray(occupied, [](bool seen, bool) {return seen;});
}

DenseGrid resolve_occlusion(const DenseGrid & occupied)
{
  return per_ray(occupied, [](bool seen, bool occ) {return occ && !seen;});
}

DenseGrid deocclusion_mask(const DenseGrid & object_voxels)
{
  return per_ray(object_voxels, [](bool seen, bool occ) {return seen || occ;});
}

PointCloud resample(const DenseGrid & occupied)
{
  const GridConfig & cfg = occupied.config;
  PointCloud out;
  for (int ir = 0; ir < cfg.n_r; ++ir) {
    for (int t = 0; t < cfg.n_theta; ++t) {
      for (int p = 0; p < cfg.n_phi; ++p) {
        if (occupied.at(ir, t, p)) {
          out.push_back(voxel_center(VoxelIndex{ir, t, p}, cfg));
        }
      }
    }
  }
  return out;
}

BevHistogram bev_histogram(const DenseGrid & occupied)
{
  const GridConfig & cfg = occupied.config;
  BevHistogram h;
  h.n_theta = cfg.n_theta;
  h.n_r = cfg.n_r;
  h.values.assign(static_cast<std::size_t>(cfg.n_theta) * static_cast<std::size_t>(cfg.n_r), 0.0);
  double total = 0.0;
  for (int ir = 0; ir < cfg.n_r; ++ir) {
    for (int t = 0; t < cfg.n_theta; ++t) {
      for (int p = 0; p < cfg.n_phi; ++p) {
        if (occupied.at(ir, t, p)) {
          h.values[static_cast<std::size_t>(t) * static_cast<std::size_t>(cfg.n_r) +
            static_cast<std::size_t>(ir)] += 1.0;
          total += 1.0;
        }
      }
    }
  }
  if (total > 0.0) {
    for (double & v : h.values) {
      v /= total;
    }
    h.normalized = true;
  }
  return h;
}

double chamfer(const PointCloud & a, const PointCloud & b)
{
  auto directed = [](const PointCloud & from, const PointCloud & to) {
      double sum = 0.0;
      for (const Point & p : from.points()) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point & q : to.points()) {
          best = std::min(best, (p.position() - q.position()).norm());
        }
        sum += best;
      }
      return sum / static_cast<double>(from.size());
    };
  return directed(a, b) + directed(b, a);
}

std::vector<double> raycast_ranges(const AnalyticScene & scene, const GridConfig & cfg)
{
  std::vector<double> ranges(cfg.ray_count(), std::numeric_limits<double>::infinity());
  for (int t = 0; t < cfg.n_theta; ++t) {
    for (int p = 0; p < cfg.n_phi; ++p) {
      const Vec3 dir = ray_direction(t, p, cfg);
      double best = ground_intersection(scene.ground, dir);
      for (const Wall & w : scene.walls) {
        const double denom = w.nx * dir.x() + w.ny * dir.y();
        if (denom != 0.0 && w.d / denom > 0.0) {
          best = std::min(best, w.d / denom);
        }
      }
      for (const LabeledBox & o : scene.objects) {
        if (const auto hit = ray_box_entry(Vec3::Zero(), dir, o.box)) {
          best = std::min(best, *hit);
        }
      }
      if (best < cfg.r_max) {
        ranges[ray_index(t, p, cfg)] = (best * dir).norm();
      }
    }
  }
  return ranges;
}

}  // namespace scanedit::reference
