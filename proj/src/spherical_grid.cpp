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

#include "scanedit/spherical_grid.hpp"

#include "scanedit/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace scanedit
{

namespace
{

// Below this many rays the OpenMP fork costs more than the sweep.
constexpr std::ptrdiff_t kParallelRays = 2048;
constexpr std::ptrdiff_t kParallelPoints = 4096;

std::string format_exact(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void GridConfig::validate() const
{
  if (n_r <= 0 || n_theta <= 0 || n_phi <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid bin counts must be positive");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::kInvalidArgument, "grid r_max must be positive");
  }
  if (!(phi_min >= 0.0 && phi_min < phi_max && phi_max <= 180.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid requires 0 <= phi_min < phi_max <= 180");
  }
  if (voxel_count() >= kNoVoxel) {
    throw Error(ErrorCode::kInvalidArgument, "grid has too many voxels for 32-bit ids");
  }
}

VoxelId voxel_id(const VoxelIndex & v, const GridConfig & cfg)
{
  return static_cast<VoxelId>(ray_index(v, cfg) * static_cast<std::size_t>(cfg.n_r) +
         static_cast<std::size_t>(v.ir));
}

VoxelIndex voxel_from_id(VoxelId id, const GridConfig & cfg)
{
  const std::size_t ray = id / static_cast<std::size_t>(cfg.n_r);
  return VoxelIndex{
    static_cast<int>(id % static_cast<std::size_t>(cfg.n_r)),
    static_cast<int>(ray / static_cast<std::size_t>(cfg.n_phi)),
    static_cast<int>(ray % static_cast<std::size_t>(cfg.n_phi))};
}

SphericalCoord to_spherical(const Vec3 & p)
{
  const double r = std::sqrt(p.x() * p.x() + p.y() * p.y() + p.z() * p.z());
  if (r == 0.0) {
    throw Error(ErrorCode::kOriginPoint, "point at the sensor origin has no direction");
  }
  double theta = rad_to_deg(std::atan2(p.y(), p.x()));
  if (theta < 0.0) {
    theta += 360.0;
  }
  if (theta >= 360.0) {
    theta = 0.0;
  }
  const double phi = rad_to_deg(std::acos(std::clamp(p.z() / r, -1.0, 1.0)));
  return {r, theta, phi};
}

Vec3 from_spherical(const SphericalCoord & s)
{
  const double th = deg_to_rad(s.theta);
  const double ph = deg_to_rad(s.phi);
  const double sp = std::sin(ph);
  return {s.r * sp * std::cos(th), s.r * sp * std::sin(th), s.r * std::cos(ph)};
}

std::optional<std::size_t> ray_of(const SphericalCoord & s, const GridConfig & cfg)
{
  if (s.phi < cfg.phi_min || s.phi >= cfg.phi_max) {
    return std::nullopt;
  }
  const int itheta = std::min(static_cast<int>(std::floor(s.theta / cfg.dtheta())), cfg.n_theta - 1);
  const int iphi = std::clamp(
    static_cast<int>(std::floor((s.phi - cfg.phi_min) / cfg.dphi())), 0, cfg.n_phi - 1);
  return ray_index(std::max(itheta, 0), iphi, cfg);
}

std::optional<VoxelIndex> voxel_of(const SphericalCoord & s, const GridConfig & cfg)
{
  if (s.r >= cfg.r_max || s.r < 0.0) {
    return std::nullopt;
  }
  if (s.phi < cfg.phi_min || s.phi >= cfg.phi_max) {
    return std::nullopt;
  }
  VoxelIndex v;
  v.ir = std::min(static_cast<int>(std::floor(s.r / cfg.dr())), cfg.n_r - 1);
  v.itheta = std::clamp(static_cast<int>(std::floor(s.theta / cfg.dtheta())), 0, cfg.n_theta - 1);
  v.iphi = std::clamp(
    static_cast<int>(std::floor((s.phi - cfg.phi_min) / cfg.dphi())), 0, cfg.n_phi - 1);
  return v;
}

std::optional<VoxelIndex> voxel_of(const Vec3 & p, const GridConfig & cfg)
{
  if (p.x() == 0.0 && p.y() == 0.0 && p.z() == 0.0) {
    return std::nullopt;
  }
  return voxel_of(to_spherical(p), cfg);
}

SphericalCoord voxel_center_spherical(const VoxelIndex & v, const GridConfig & cfg)
{
  return {
    (v.ir + 0.5) * cfg.dr(),
    (v.itheta + 0.5) * cfg.dtheta(),
    cfg.phi_min + (v.iphi + 0.5) * cfg.dphi()};
}

Point voxel_center(const VoxelIndex & v, const GridConfig & cfg)
{
  return Point::at(from_spherical(voxel_center_spherical(v, cfg)));
}

Vec3 ray_direction(int itheta, int iphi, const GridConfig & cfg)
{
  return from_spherical({1.0, (itheta + 0.5) * cfg.dtheta(), cfg.phi_min + (iphi + 0.5) * cfg.dphi()});
}

// ---------------------------------------------------------------------------
// VoxelVolume

VoxelVolume::VoxelVolume(const GridConfig & cfg)
: config_(cfg),
  words_per_ray_((static_cast<std::size_t>(cfg.n_r) + 63) / 64),
  words_(cfg.ray_count() * words_per_ray_, 0)
{
}

bool VoxelVolume::test_id(VoxelId id) const
{
  const std::size_t n_r = static_cast<std::size_t>(config_.n_r);
  return test(id / n_r, static_cast<int>(id % n_r));
}

void VoxelVolume::set_id(VoxelId id)
{
  const std::size_t n_r = static_cast<std::size_t>(config_.n_r);
  set(id / n_r, static_cast<int>(id % n_r));
}

void VoxelVolume::set_range(std::size_t ray, int lo, int hi)
{
  lo = std::max(lo, 0);
  hi = std::min(hi, config_.n_r);
  if (lo >= hi) {
    return;
  }
  auto words = ray_words(ray);
  const std::size_t w_lo = static_cast<std::size_t>(lo) / 64;
  const std::size_t w_hi = static_cast<std::size_t>(hi - 1) / 64;
  for (std::size_t w = w_lo; w <= w_hi; ++w) {
    const int base = static_cast<int>(w * 64);
    const int from = std::max(lo, base) - base;
    const int to = std::min(hi, base + 64) - base;  // exclusive, 1..64
    const std::uint64_t upper = to == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << to) - 1);
    const std::uint64_t lower = (std::uint64_t{1} << from) - 1;
    words[w] |= upper & ~lower;
  }
}

void VoxelVolume::clear_ray(std::size_t ray)
{
  for (auto & w : ray_words(ray)) {
    w = 0;
  }
}

int VoxelVolume::first_in_ray(std::size_t ray) const
{
  const auto words = ray_words(ray);
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (words[w] != 0) {
      return static_cast<int>(w * 64) + std::countr_zero(words[w]);
    }
  }
  return -1;
}

int VoxelVolume::count_in_ray(std::size_t ray) const
{
  int n = 0;
  for (const auto w : ray_words(ray)) {
    n += std::popcount(w);
  }
  return n;
}

bool VoxelVolume::ray_any(std::size_t ray) const
{
  for (const auto w : ray_words(ray)) {
    if (w != 0) {
      return true;
    }
  }
  return false;
}

std::size_t VoxelVolume::count() const
{
  std::size_t n = 0;
  for (const auto w : words_) {
    n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

bool VoxelVolume::none() const
{
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) {return w == 0;});
}

void VoxelVolume::clear()
{
  std::fill(words_.begin(), words_.end(), 0);
}

void VoxelVolume::require_same_shape(const VoxelVolume & other) const
{
  if (!(config_ == other.config_)) {
    throw Error(ErrorCode::kInvalidArgument, "voxel volumes have different grid configs");
  }
}

VoxelVolume & VoxelVolume::operator|=(const VoxelVolume & other)
{
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] |= other.words_[i];
  }
  return *this;
}

VoxelVolume & VoxelVolume::operator&=(const VoxelVolume & other)
{
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= other.words_[i];
  }
  return *this;
}

VoxelVolume & VoxelVolume::subtract(const VoxelVolume & other)
{
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= ~other.words_[i];
  }
  return *this;
}

bool VoxelVolume::intersects(const VoxelVolume & other) const
{
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) {
      return true;
    }
  }
  return false;
}

bool VoxelVolume::is_subset_of(const VoxelVolume & other) const
{
  require_same_shape(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) {
      return false;
    }
  }
  return true;
}

std::vector<VoxelIndex> VoxelVolume::indices() const
{
  // (ir, ray) keys sort into ir-major, itheta, iphi order
  std::vector<std::uint64_t> keys;
  const std::size_t rays = config_.ray_count();
  for (std::size_t ray = 0; ray < rays; ++ray) {
    const auto words = ray_words(ray);
    for (std::size_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = words[w];
      while (bits != 0) {
        const int ir = static_cast<int>(w * 64) + std::countr_zero(bits);
        keys.push_back(static_cast<std::uint64_t>(ir) * rays + ray);
        bits &= bits - 1;
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  std::vector<VoxelIndex> out;
  out.reserve(keys.size());
  for (const auto key : keys) {
    const std::size_t ray = key % rays;
    out.push_back(VoxelIndex{
      static_cast<int>(key / rays),
      static_cast<int>(ray / static_cast<std::size_t>(config_.n_phi)),
      static_cast<int>(ray % static_cast<std::size_t>(config_.n_phi))});
  }
  return out;
}

bool VoxelVolume::operator==(const VoxelVolume & other) const
{
  return config_ == other.config_ && words_ == other.words_;
}

// ---------------------------------------------------------------------------
// Kernels

OccupancyGrid voxelize(const PointCloud & cloud, const GridConfig & cfg, VoxelizeOptions options)
{
  cfg.validate();
  OccupancyGrid grid(cfg);
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
  grid.point_voxels.assign(cloud.size(), kNoVoxel);

  const Point * pts = cloud.points().data();
  VoxelId * ids = grid.point_voxels.data();
#pragma omp parallel for schedule(static) if (n >= kParallelPoints)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto v = voxel_of(pts[i].position(), cfg);
    if (v) {
      ids[i] = voxel_id(*v, cfg);
    }
  }

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (ids[i] == kNoVoxel) {
      ++grid.dropped;
    } else {
      grid.occupied.set_id(ids[i]);
    }
  }

  if (options.point_lists) {
    auto & lists = grid.point_lists.emplace();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      if (ids[i] != kNoVoxel) {
        lists[voxel_from_id(ids[i], cfg)].push_back(i);
      }
    }
  }
  return grid;
}

PointCloud resample(const VoxelVolume & occupied)
{
  const auto voxels = occupied.indices();
  std::vector<Point> points(voxels.size());
  const auto n = static_cast<std::ptrdiff_t>(voxels.size());
  const GridConfig & cfg = occupied.config();
#pragma omp parallel for schedule(static) if (n >= kParallelPoints)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    points[i] = voxel_center(voxels[i], cfg);
  }
  return PointCloud(std::move(points));
}

VoxelMask occlusion_mask(const VoxelVolume & occupied)
{
  const GridConfig & cfg = occupied.config();
  VoxelMask mask(cfg);
  const auto rays = static_cast<std::ptrdiff_t>(cfg.ray_count());
#pragma omp parallel for schedule(static) if (rays >= kParallelRays)
  for (std::ptrdiff_t ray = 0; ray < rays; ++ray) {
    const int first = occupied.first_in_ray(static_cast<std::size_t>(ray));
    if (first >= 0) {
      mask.set_range(static_cast<std::size_t>(ray), first + 1, cfg.n_r);
    }
  }
  return mask;
}

VoxelVolume resolve_occlusion(const VoxelVolume & occupied)
{
  const GridConfig & cfg = occupied.config();
  VoxelVolume out(cfg);
  const auto rays = static_cast<std::ptrdiff_t>(cfg.ray_count());
#pragma omp parallel for schedule(static) if (rays >= kParallelRays)
  for (std::ptrdiff_t ray = 0; ray < rays; ++ray) {
    const int first = occupied.first_in_ray(static_cast<std::size_t>(ray));
    if (first >= 0) {
      out.set(static_cast<std::size_t>(ray), first);
    }
  }
  return out;
}

OccupancyGrid resolve_occlusion(const OccupancyGrid & grid)
{
  OccupancyGrid out(grid.config);
  out.occupied = resolve_occlusion(grid.occupied);
  return out;
}

std::vector<std::size_t> occupied_rays(const VoxelVolume & volume)
{
  std::vector<std::size_t> rays;
  const std::size_t n = volume.config().ray_count();
  for (std::size_t ray = 0; ray < n; ++ray) {
    if (volume.ray_any(ray)) {
      rays.push_back(ray);
    }
  }
  return rays;
}

std::string write_grid_dump(const VoxelVolume & volume)
{
  const GridConfig & cfg = volume.config();
  std::string out = "scanedit-voxels 1\n";
  out += "n_r " + std::to_string(cfg.n_r) + "\n";
  out += "n_theta " + std::to_string(cfg.n_theta) + "\n";
  out += "n_phi " + std::to_string(cfg.n_phi) + "\n";
  out += "r_max " + format_exact(cfg.r_max) + "\n";
  out += "phi_min " + format_exact(cfg.phi_min) + "\n";
  out += "phi_max " + format_exact(cfg.phi_max) + "\n";

  std::vector<std::pair<VoxelId, VoxelId>> runs;
  const std::size_t rays = cfg.ray_count();
  for (std::size_t ray = 0; ray < rays; ++ray) {
    for (int ir = 0; ir < cfg.n_r; ++ir) {
      if (!volume.test(ray, ir)) {
        continue;
      }
      const auto id = static_cast<VoxelId>(ray * static_cast<std::size_t>(cfg.n_r) +
        static_cast<std::size_t>(ir));
      if (!runs.empty() && runs.back().first + runs.back().second == id) {
        ++runs.back().second;
      } else {
        runs.emplace_back(id, 1);
      }
    }
  }
  out += "runs " + std::to_string(runs.size()) + "\n";
  for (const auto & [start, len] : runs) {
    out += std::to_string(start) + ' ' + std::to_string(len) + '\n';
  }
  return out;
}

VoxelVolume read_grid_dump(const std::string & text)
{
  std::istringstream in(text);
  auto fail = [](const std::string & what) {
      return Error(ErrorCode::kMalformedGridDump, "grid dump: " + what);
    };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "scanedit-voxels" || version != 1) {
    throw fail("missing 'scanedit-voxels 1' header");
  }
  GridConfig cfg;
  auto expect = [&](const char * key, auto & value) {
      std::string k;
      if (!(in >> k >> value) || k != key) {
        throw fail(std::string("expected field '") + key + "'");
      }
    };
  expect("n_r", cfg.n_r);
  expect("n_theta", cfg.n_theta);
  expect("n_phi", cfg.n_phi);
  expect("r_max", cfg.r_max);
  expect("phi_min", cfg.phi_min);
  expect("phi_max", cfg.phi_max);
  try {
    cfg.validate();
  } catch (const Error & e) {
    throw fail(e.what());
  }
  std::size_t n_runs = 0;
  expect("runs", n_runs);
  VoxelVolume volume(cfg);
  const std::size_t total = cfg.voxel_count();
  for (std::size_t i = 0; i < n_runs; ++i) {
    std::size_t start = 0;
    std::size_t len = 0;
    if (!(in >> start >> len) || len == 0 || start + len > total) {
      throw fail("bad run " + std::to_string(i));
    }
    for (std::size_t id = start; id < start + len; ++id) {
      volume.set_id(static_cast<VoxelId>(id));
    }
  }
  return volume;
}

}  // namespace scanedit
