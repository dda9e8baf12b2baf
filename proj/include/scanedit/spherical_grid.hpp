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

#ifndef SCANEDIT__SPHERICAL_GRID_HPP_
#define SCANEDIT__SPHERICAL_GRID_HPP_

#include "scanedit/types.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scanedit
{

/// r in meters; theta (azimuth, atan2(y, x)) in degrees within [0, 360);
/// phi in degrees measured from +z (inclination), so the horizon is 90.
struct SphericalCoord
{
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Spherical discretization. Azimuth always spans the full circle. The
/// defaults are the 512 x 512 x 32 grid over [0, 50] m x [0, 360) deg x
/// [79.3, 121] deg, which matches a 32-beam HDL-32E (+10.7 to -31 deg about
/// the horizon) when phi is read as inclination from +z.
struct GridConfig
{
  int n_r = 512;
  int n_theta = 512;
  int n_phi = 32;
  double r_max = 50.0;
  double phi_min = 79.3;
  double phi_max = 121.0;

  double dr() const { return r_max / n_r; }
  double dtheta() const { return 360.0 / n_theta; }
  double dphi() const { return (phi_max - phi_min) / n_phi; }

  std::size_t ray_count() const
  {
    return static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi);
  }
  std::size_t voxel_count() const { return ray_count() * static_cast<std::size_t>(n_r); }

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;

  bool operator==(const GridConfig &) const = default;
};

struct VoxelIndex
{
  int ir = 0;
  int itheta = 0;
  int iphi = 0;

  auto operator<=>(const VoxelIndex &) const = default;
};

/// Rays are numbered theta-major: ray = itheta * n_phi + iphi.
inline std::size_t ray_index(int itheta, int iphi, const GridConfig & cfg)
{
  return static_cast<std::size_t>(itheta) * static_cast<std::size_t>(cfg.n_phi) +
         static_cast<std::size_t>(iphi);
}
inline std::size_t ray_index(const VoxelIndex & v, const GridConfig & cfg)
{
  return ray_index(v.itheta, v.iphi, cfg);
}

/// Compact voxel id, ray * n_r + ir.
using VoxelId = std::uint32_t;
inline constexpr VoxelId kNoVoxel = std::numeric_limits<VoxelId>::max();

VoxelId voxel_id(const VoxelIndex & v, const GridConfig & cfg);
VoxelIndex voxel_from_id(VoxelId id, const GridConfig & cfg);

/// Throws OriginPoint for r = 0.
SphericalCoord to_spherical(const Vec3 & p);
inline SphericalCoord to_spherical(const Point & p) { return to_spherical(p.position()); }
Vec3 from_spherical(const SphericalCoord & s);

/// Half-open bins on every axis; empty when r >= r_max or phi is outside
/// [phi_min, phi_max).
std::optional<VoxelIndex> voxel_of(const SphericalCoord & s, const GridConfig & cfg);

/// Cartesian convenience; the origin maps to no voxel instead of throwing.
std::optional<VoxelIndex> voxel_of(const Vec3 & p, const GridConfig & cfg);

/// The (theta, phi) ray a direction falls on, ignoring range.
std::optional<std::size_t> ray_of(const SphericalCoord & s, const GridConfig & cfg);

SphericalCoord voxel_center_spherical(const VoxelIndex & v, const GridConfig & cfg);

/// Cartesian center of a voxel; intensity 0 and no ring.
Point voxel_center(const VoxelIndex & v, const GridConfig & cfg);

/// Unit direction through the angular center of a ray.
Vec3 ray_direction(int itheta, int iphi, const GridConfig & cfg);

/// Dense boolean volume over (ir, itheta, iphi). Bits are stored ray-major,
/// each ray padded to whole 64-bit words, so one ray never shares a word with
/// another and per-ray kernels can run in parallel without synchronization.
class VoxelVolume
{
public:
  explicit VoxelVolume(const GridConfig & cfg);

  const GridConfig & config() const { return config_; }
  std::size_t words_per_ray() const { return words_per_ray_; }

  bool test(const VoxelIndex & v) const { return test(ray_index(v, config_), v.ir); }
  void set(const VoxelIndex & v, bool value = true) { set(ray_index(v, config_), v.ir, value); }

  bool test(std::size_t ray, int ir) const
  {
    return (words_[ray * words_per_ray_ + static_cast<std::size_t>(ir) / 64] >> (ir % 64)) & 1u;
  }
  void set(std::size_t ray, int ir, bool value = true)
  {
    std::uint64_t & w = words_[ray * words_per_ray_ + static_cast<std::size_t>(ir) / 64];
    const std::uint64_t bit = std::uint64_t{1} << (ir % 64);
    w = value ? (w | bit) : (w & ~bit);
  }
  bool test_id(VoxelId id) const;
  void set_id(VoxelId id);

  /// Sets bits [lo, hi) of a ray.
  void set_range(std::size_t ray, int lo, int hi);
  void clear_ray(std::size_t ray);

  std::span<const std::uint64_t> ray_words(std::size_t ray) const
  {
    return {words_.data() + ray * words_per_ray_, words_per_ray_};
  }
  std::span<std::uint64_t> ray_words(std::size_t ray)
  {
    return {words_.data() + ray * words_per_ray_, words_per_ray_};
  }

  /// Smallest set ir on the ray, or -1.
  int first_in_ray(std::size_t ray) const;
  int count_in_ray(std::size_t ray) const;
  bool ray_any(std::size_t ray) const;

  std::size_t count() const;
  bool none() const;
  void clear();

  VoxelVolume & operator|=(const VoxelVolume & other);
  VoxelVolume & operator&=(const VoxelVolume & other);
  /// this = this & ~other
  VoxelVolume & subtract(const VoxelVolume & other);
  bool intersects(const VoxelVolume & other) const;
  bool is_subset_of(const VoxelVolume & other) const;

  /// Set voxels in ir-major, then itheta, then iphi order.
  std::vector<VoxelIndex> indices() const;

  bool operator==(const VoxelVolume & other) const;

private:
  void require_same_shape(const VoxelVolume & other) const;

  GridConfig config_;
  std::size_t words_per_ray_;
  std::vector<std::uint64_t> words_;
};

using VoxelMask = VoxelVolume;

/// Occupancy of a voxelized cloud. `point_voxels[i]` is the voxel of input
/// point i, or kNoVoxel when the point fell outside the grid.
struct OccupancyGrid
{
  explicit OccupancyGrid(const GridConfig & cfg) : config(cfg), occupied(cfg) {}

  GridConfig config;
  VoxelVolume occupied;
  std::vector<VoxelId> point_voxels;
  std::size_t dropped = 0;
  std::optional<std::map<VoxelIndex, std::vector<std::size_t>>> point_lists;
};

struct VoxelizeOptions
{
  bool point_lists = false;
};

/// Out-of-range (and origin) points are dropped and counted in `dropped`.
OccupancyGrid voxelize(const PointCloud & cloud, const GridConfig & cfg, VoxelizeOptions options = {});

/// One point per occupied voxel, at its center, in ir-major then itheta then
/// iphi order.
PointCloud resample(const VoxelVolume & occupied);
inline PointCloud resample(const OccupancyGrid & grid) { return resample(grid.occupied); }

/// For every ray with an occupied voxel, all voxels beyond the nearest one.
VoxelMask occlusion_mask(const VoxelVolume & occupied);
inline VoxelMask occlusion_mask(const OccupancyGrid & grid) { return occlusion_mask(grid.occupied); }

/// Keeps only the nearest occupied voxel of every ray.
VoxelVolume resolve_occlusion(const VoxelVolume & occupied);

/// The returned grid carries occupancy only (no per-point bookkeeping).
OccupancyGrid resolve_occlusion(const OccupancyGrid & grid);

/// Rays (theta-major ids) that contain at least one set voxel.
std::vector<std::size_t> occupied_rays(const VoxelVolume & volume);

/// Text dump: a config header followed by run-length-encoded set voxels in
/// compact-id order. Used for region masks on the command line.
std::string write_grid_dump(const VoxelVolume & volume);
VoxelVolume read_grid_dump(const std::string & text);

}  // namespace scanedit

#endif  // SCANEDIT__SPHERICAL_GRID_HPP_
