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

#include "scanedit/metrics.hpp"

#include "scanedit/error.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <numeric>

namespace scanedit
{

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace
{

template<class Fn>
void for_each_bit(std::span<const std::uint64_t> words, Fn && fn)
{
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (std::uint64_t bits = words[w]; bits != 0; bits &= bits - 1) {
      fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
    }
  }
}

}  // namespace

double BevHistogram::sum() const
{
  return std::accumulate(values.begin(), values.end(), 0.0);
}

BevHistogram bev_histogram(const VoxelVolume & occupied, const VoxelMask * region)
{
  const GridConfig & cfg = occupied.config();
  if (region != nullptr && !(region->config() == cfg)) {
    throw Error(ErrorCode::kInvalidArgument, "region mask shape differs from the grid");
  }
  BevHistogram h;
  h.n_theta = cfg.n_theta;
  h.n_r = cfg.n_r;
  h.values.assign(static_cast<std::size_t>(cfg.n_theta) * static_cast<std::size_t>(cfg.n_r), 0.0);
  const std::size_t n_r = static_cast<std::size_t>(cfg.n_r);

  const int n_theta = cfg.n_theta;
#pragma omp parallel for schedule(static) if (cfg.ray_count() >= 2048)
  for (int t = 0; t < n_theta; ++t) {
    double * row = h.values.data() + static_cast<std::size_t>(t) * n_r;
    std::vector<std::uint8_t> in_region(n_r, region == nullptr ? 1 : 0);
    for (int p = 0; p < cfg.n_phi; ++p) {
      const std::size_t ray = ray_index(t, p, cfg);
      for_each_bit(occupied.ray_words(ray), [&](std::size_t r) {row[r] += 1.0;});
      if (region != nullptr) {
        for_each_bit(region->ray_words(ray), [&](std::size_t r) {in_region[r] = 1;});
      }
    }
    for (std::size_t r = 0; r < n_r; ++r) {
      if (!in_region[r]) {
        row[r] = 0.0;
      }
    }
  }

  const double total = h.sum();
  if (total > 0.0) {
    for (double & v : h.values) {
      v /= total;
    }
    h.normalized = true;
  }
  return h;
}

std::size_t region_columns(const VoxelMask & region)
{
  const GridConfig & cfg = region.config();
  std::size_t n = 0;
  for (int t = 0; t < cfg.n_theta; ++t) {
    for (int r = 0; r < cfg.n_r; ++r) {
      for (int p = 0; p < cfg.n_phi; ++p) {
        if (region.test(ray_index(t, p, cfg), r)) {
          ++n;
          break;
        }
      }
    }
  }
  return n;
}

namespace
{

void require_normalized(const BevHistogram & h, const char * which)
{
  if (std::abs(h.sum() - 1.0) > 1e-9) {
    throw Error(
      ErrorCode::kUnnormalizedInput,
      std::string(which) + " histogram is not normalized (sum " + std::to_string(h.sum()) + ")");
  }
}

double sq_dist(const BevHistogram & a, const BevHistogram & b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    s += d * d;
  }
  return s;
}

}  // namespace

double jsd(const BevHistogram & p, const BevHistogram & q, double log_base)
{
  require_normalized(p, "first");
  require_normalized(q, "second");
  if (p.values.size() != q.values.size()) {
    throw Error(ErrorCode::kUnnormalizedInput, "histograms have different supports");
  }
  if (!(log_base > 0.0) || log_base == 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "log base must be positive and not 1");
  }
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double a = p.values[i];
    const double b = q.values[i];
    const double m = 0.5 * (a + b);
    if (a > 0.0) {
      kl_p += a * std::log(a / m);
    }
    if (b > 0.0) {
      kl_q += b * std::log(b / m);
    }
  }
  return std::max(0.0, 0.5 * (kl_p + kl_q)) / std::log(log_base);
}

MmdResult mmd(
  std::span<const BevHistogram> x, std::span<const BevHistogram> y, std::optional<double> bandwidth)
{
  if (x.empty() || y.empty()) {
    throw Error(ErrorCode::kEmptySet, "MMD needs two nonempty sets");
  }
  const std::size_t len = x.front().values.size();
  for (const auto * set : {&x, &y}) {
    for (const BevHistogram & h : *set) {
      require_normalized(h, "set member");
      if (h.values.size() != len) {
        throw Error(ErrorCode::kUnnormalizedInput, "histograms have different supports");
      }
    }
  }

  std::vector<const BevHistogram *> all;
  for (const auto & h : x) {
    all.push_back(&h);
  }
  for (const auto & h : y) {
    all.push_back(&h);
  }
  const std::size_t n = all.size();
  std::vector<double> d2(n * n, 0.0);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (n * n * len >= (1u << 20))
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
      const double v = sq_dist(*all[static_cast<std::size_t>(i)], *all[j]);
      d2[static_cast<std::size_t>(i) * n + j] = v;
      d2[j * n + static_cast<std::size_t>(i)] = v;
    }
  }

  double sigma = 1.0;
  if (bandwidth) {
    if (!(*bandwidth > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "MMD bandwidth must be positive");
    }
    sigma = *bandwidth;
  } else {
    std::vector<double> dist;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        dist.push_back(std::sqrt(d2[i * n + j]));
      }
    }
    if (!dist.empty()) {
      const std::size_t mid = dist.size() / 2;
      std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
      double median = dist[mid];
      if (dist.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid)));
      }
      if (median > 0.0) {
        sigma = median;
      }
    }
  }
  const double inv = 1.0 / (2.0 * sigma * sigma);
  auto k = [&](std::size_t i, std::size_t j) {return std::exp(-d2[i * n + j] * inv);};

  // Within-set mean; the unbiased form skips the diagonal.
  auto within = [&](std::size_t begin, std::size_t end) {
      const std::size_t m = end - begin;
      if (m == 1) {
        return 1.0;
      }
      double s = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = begin; j < end; ++j) {
          if (i != j) {
            s += k(i, j);
          }
        }
      }
      return s / static_cast<double>(m * (m - 1));
    };
  const std::size_t nx = x.size();
  double cross = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = nx; j < n; ++j) {
      cross += k(i, j);
    }
  }
  cross /= static_cast<double>(nx * y.size());
  const double value = within(0, nx) + within(nx, n) - 2.0 * cross;
  return {std::max(0.0, value), sigma};
}

namespace
{

using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using Tree = bgi::rtree<BPoint, bgi::quadratic<16>>;

Tree build_tree(const PointCloud & cloud)
{
  std::vector<BPoint> pts;
  pts.reserve(cloud.size());
  for (const Point & p : cloud.points()) {
    pts.emplace_back(p.x, p.y, p.z);
  }
  return Tree(pts.begin(), pts.end());
}

}  // namespace

double directed_chamfer(const PointCloud & from, const PointCloud & to)
{
  if (from.empty() || to.empty()) {
    throw Error(ErrorCode::kEmptyCloud, "chamfer distance needs nonempty clouds");
  }
  const Tree tree = build_tree(to);
  const auto n = static_cast<std::ptrdiff_t>(from.size());
  std::vector<double> nearest(from.size());
#pragma omp parallel for schedule(static) if (n >= 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Point & p = from[static_cast<std::size_t>(i)];
    const BPoint q(p.x, p.y, p.z);
    BPoint hit(0.0, 0.0, 0.0);
    tree.query(bgi::nearest(q, 1), &hit);
    const double dx = hit.get<0>() - p.x;
    const double dy = hit.get<1>() - p.y;
    const double dz = hit.get<2>() - p.z;
    nearest[static_cast<std::size_t>(i)] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
  return std::accumulate(nearest.begin(), nearest.end(), 0.0) / static_cast<double>(from.size());
}

double chamfer(const PointCloud & a, const PointCloud & b)
{
  return directed_chamfer(a, b) + directed_chamfer(b, a);
}

std::string format_metric_report(std::span<const MetricRow> rows)
{
  std::string out = "metric\tvalue\tparameters\tregion_size\n";
  char buf[64];
  for (const MetricRow & row : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g", row.value);
    out += row.name + "\t" + buf + "\t" + row.parameters + "\t" + std::to_string(row.region_size) +
      "\n";
  }
  return out;
}

}  // namespace scanedit
