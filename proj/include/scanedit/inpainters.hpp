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

#ifndef SCANEDIT__INPAINTERS_HPP_
#define SCANEDIT__INPAINTERS_HPP_

#include "scanedit/removal.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scanedit
{

/// Copies the nearest object-free azimuth sector of the mask's width into the
/// masked region. Candidates are tried at increasing offsets, the higher
/// azimuth first at each distance. Throws NoDonorSector.
class TilingInpainter final : public Inpainter
{
public:
  std::string_view name() const override { return "tiling"; }
  std::vector<Point> fill(const InpaintRequest & request) const override;
};

/// z = a x + b y + c
struct GroundPlane
{
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double z_at(double x, double y) const { return a * x + b * y + c; }
  /// Unit normal pointing up.
  Vec3 normal() const { return Vec3(-a, -b, 1.0).normalized(); }
};

/// Least-squares fit of z = a x + b y + c. Needs at least three
/// non-collinear points.
GroundPlane fit_ground_plane(std::span<const Vec3> points);

struct GroundExtrapolationOptions
{
  /// Ground points farther than this (in x-y) from the mask's near edge are
  /// ignored.
  double context_radius = 15.0;
  std::size_t min_ground_points = 50;
};

/// Fits a plane to nearby ground-labeled points and emits, for every masked
/// ray, its intersection with the plane if that lands in a masked voxel.
/// Throws InsufficientGroundContext.
class GroundExtrapolationInpainter final : public Inpainter
{
public:
  explicit GroundExtrapolationInpainter(GroundExtrapolationOptions options = {})
  : options_(options)
  {
  }

  std::string_view name() const override { return "ground_extrapolation"; }
  std::vector<Point> fill(const InpaintRequest & request) const override;

  /// The plane used by `fill`, exposed for inspection.
  GroundPlane fit_context_plane(const InpaintRequest & request) const;

private:
  GroundExtrapolationOptions options_;
};

/// "tiling" or "ground_extrapolation"; throws InvalidArgument otherwise.
std::unique_ptr<Inpainter> make_inpainter(const std::string & name);

}  // namespace scanedit

#endif  // SCANEDIT__INPAINTERS_HPP_
