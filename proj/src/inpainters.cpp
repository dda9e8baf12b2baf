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

#include "scanedit/inpainters.hpp"

#include "scanedit/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <optional>

namespace scanedit
{

namespace
{

std::vector<std::uint8_t> masked_columns(const VoxelMask & mask)
{
  const GridConfig & cfg = mask.config();
  std::vector<std::uint8_t> cols(static_cast<std::size_t>(cfg.n_theta), 0);
  for (int t = 0; t < cfg.n_theta; ++t) {
    for (int p = 0; p < cfg.n_phi; ++p) {
      if (mask.ray_any(ray_index(t, p, cfg))) {
        cols[static_cast<std::size_t>(t)] = 1;
        break;
      }
    }
  }
  return cols;
}

int column_of(const Point & p, const GridConfig & cfg)
{
  if (p.x == 0.0 && p.y == 0.0 && p.z == 0.0) {
    return -1;
  }
  const double theta = to_spherical(p).theta;
  return std::clamp(static_cast<int>(theta / cfg.dtheta()), 0, cfg.n_theta - 1);
}

}  // namespace

std::vector<Point> TilingInpainter::fill(const InpaintRequest & req) const
{
  const GridConfig & cfg = req.config;
  const int n = cfg.n_theta;
  const auto cols = masked_columns(req.mask);
  const auto n_masked = std::count(cols.begin(), cols.end(), 1);
  if (n_masked == 0) {
    return {};
  }
  if (n_masked == n) {
    throw Error(ErrorCode::kNoDonorSector, "mask covers every azimuth column");
  }

  // The mask's azimuth extent is the complement of the longest circular run
  // of unmasked columns.
  int best_gap = 0;
  int best_gap_end = 0;
  for (int start = 0; start < n; ++start) {
    if (cols[static_cast<std::size_t>(start)] ||
      !cols[static_cast<std::size_t>((start + n - 1) % n)])
    {
      continue;
    }
    int len = 0;
    while (len < n && !cols[static_cast<std::size_t>((start + len) % n)]) {
      ++len;
    }
    if (len > best_gap) {
      best_gap = len;
      best_gap_end = (start + len - 1) % n;
    }
  }
  const int t0 = (best_gap_end + 1) % n;
  const int width = n - best_gap;

  const auto object_flags = object_point_flags(
    req.background, req.object_boxes, req.object_margin, req.classes);
  std::vector<int> point_cols(req.background.size());
  std::vector<std::uint8_t> object_cols(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < req.background.size(); ++i) {
    point_cols[i] = column_of(req.background[i], cfg);
    if (object_flags[i] && point_cols[i] >= 0) {
      object_cols[static_cast<std::size_t>(point_cols[i])] = 1;
    }
  }

  auto usable = [&](int offset) {
      for (int j = 0; j < width; ++j) {
        const auto c = static_cast<std::size_t>(((t0 + offset + j) % n + n) % n);
        if (cols[c] || object_cols[c]) {
          return false;
        }
      }
      return true;
    };

  std::optional<int> chosen;
  for (int k = width; k <= n - width && !chosen; ++k) {
    if (usable(k)) {
      chosen = k;
    } else if (usable(-k)) {
      chosen = -k;
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::kNoDonorSector, "no object-free sector as wide as the mask");
  }

  const int offset = *chosen;
  const double rotation = deg_to_rad(-offset * cfg.dtheta());
  std::vector<std::uint8_t> in_donor(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < width; ++j) {
    in_donor[static_cast<std::size_t>(((t0 + offset + j) % n + n) % n)] = 1;
  }

  std::vector<Point> out;
  for (std::size_t i = 0; i < req.background.size(); ++i) {
    if (point_cols[i] < 0 || !in_donor[static_cast<std::size_t>(point_cols[i])]) {
      continue;
    }
    const Vec3 q = rotate_z(req.background[i].position(), rotation);
    const auto v = voxel_of(q, cfg);
    if (v && req.mask.test(*v)) {
      out.push_back(Point::at(q));
    }
  }
  return out;
}

GroundPlane fit_ground_plane(std::span<const Vec3> points)
{
  if (points.size() < 3) {
    throw Error(ErrorCode::kInsufficientGroundContext, "plane fit needs at least three points");
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(points.size()), 3);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    design(row, 0) = points[i].x();
    design(row, 1) = points[i].y();
    design(row, 2) = 1.0;
    rhs(row) = points[i].z();
  }
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < 3) {
    throw Error(ErrorCode::kInsufficientGroundContext, "ground points are degenerate (collinear)");
  }
  const Eigen::Vector3d sol = qr.solve(rhs);
  return GroundPlane{sol(0), sol(1), sol(2)};
}

GroundPlane GroundExtrapolationInpainter::fit_context_plane(const InpaintRequest & req) const
{
  const GridConfig & cfg = req.config;
  if (!req.background.has_labels()) {
    throw Error(ErrorCode::kInsufficientGroundContext, "background carries no semantic labels");
  }

  // One anchor per masked azimuth column: the x-y position of its nearest
  // masked voxel.
  std::vector<Eigen::Vector2d> anchors;
  for (int t = 0; t < cfg.n_theta; ++t) {
    int best_ir = -1;
    int best_phi = 0;
    for (int p = 0; p < cfg.n_phi; ++p) {
      const int first = req.mask.first_in_ray(ray_index(t, p, cfg));
      if (first >= 0 && (best_ir < 0 || first < best_ir)) {
        best_ir = first;
        best_phi = p;
      }
    }
    if (best_ir >= 0) {
      const Point c = voxel_center(VoxelIndex{best_ir, t, best_phi}, cfg);
      anchors.emplace_back(c.x, c.y);
    }
  }

  const double r2 = options_.context_radius * options_.context_radius;
  std::vector<Vec3> ground;
  for (std::size_t i = 0; i < req.background.size(); ++i) {
    if (!req.classes.is_ground(req.background.label(i))) {
      continue;
    }
    const Eigen::Vector2d xy(req.background[i].x, req.background[i].y);
    for (const auto & a : anchors) {
      if ((xy - a).squaredNorm() <= r2) {
        ground.push_back(req.background[i].position());
        break;
      }
    }
  }
  if (ground.size() < options_.min_ground_points) {
    throw Error(
      ErrorCode::kInsufficientGroundContext,
      "only " + std::to_string(ground.size()) + " ground points near the mask (need " +
      std::to_string(options_.min_ground_points) + ")");
  }
  return fit_ground_plane(ground);
}

std::vector<Point> GroundExtrapolationInpainter::fill(const InpaintRequest & req) const
{
  if (req.mask.none()) {
    return {};
  }
  const GridConfig & cfg = req.config;
  const GroundPlane plane = fit_context_plane(req);

  const auto rays = static_cast<std::ptrdiff_t>(cfg.ray_count());
  std::vector<std::optional<Vec3>> hits(static_cast<std::size_t>(rays));
#pragma omp parallel for schedule(static) if (rays >= 2048)
  for (std::ptrdiff_t r = 0; r < rays; ++r) {
    const auto ray = static_cast<std::size_t>(r);
    if (!req.mask.ray_any(ray)) {
      continue;
    }
    const int itheta = static_cast<int>(ray / static_cast<std::size_t>(cfg.n_phi));
    const int iphi = static_cast<int>(ray % static_cast<std::size_t>(cfg.n_phi));
    const Vec3 d = ray_direction(itheta, iphi, cfg);
    const double denom = d.z() - plane.a * d.x() - plane.b * d.y();
    if (denom == 0.0) {
      continue;
    }
    const double t = plane.c / denom;
    if (!(t > 0.0 && t < cfg.r_max)) {
      continue;
    }
    const Vec3 p = t * d;
    const auto v = voxel_of(p, cfg);
    if (v && req.mask.test(*v)) {
      hits[ray] = p;
    }
  }

  std::vector<Point> out;
  for (const auto & h : hits) {
    if (h) {
      out.push_back(Point::at(*h));
    }
  }
  return out;
}

std::unique_ptr<Inpainter> make_inpainter(const std::string & name)
{
  if (name == "tiling") {
    return std::make_unique<TilingInpainter>();
  }
  if (name == "ground_extrapolation") {
    return std::make_unique<GroundExtrapolationInpainter>();
  }
  throw Error(
    ErrorCode::kInvalidArgument,
    "unknown inpainter '" + name + "' (expected tiling or ground_extrapolation)");
}

}  // namespace scanedit
