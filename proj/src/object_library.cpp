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

#include "scanedit/object_library.hpp"

#include "scanedit/error.hpp"
#include "scanedit/scan_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace scanedit
{

namespace
{

constexpr double kExtentSlack = 0.1;
constexpr double kMirrorTolerance = 1e-3;
constexpr const char * kManifestHeader = "id\tcategory\tl\tw\th\tsource_scan\tcompleted";

bool valid_id(const std::string & id)
{
  if (id.empty() || id.front() == '.') {
    return false;
  }
  return std::all_of(id.begin(), id.end(), [](char c) {
             return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
           });
}

bool valid_field(const std::string & s)
{
  return !s.empty() && s.find_first_of("\t\r\n ") == std::string::npos;
}

struct CellKey
{
  std::int64_t x, y, z;
  bool operator==(const CellKey &) const = default;
};

struct CellHash
{
  std::size_t operator()(const CellKey & k) const
  {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

CellKey cell_of(const Vec3 & p, double cell)
{
  return {
    static_cast<std::int64_t>(std::floor(p.x() / cell)),
    static_cast<std::int64_t>(std::floor(p.y() / cell)),
    static_cast<std::int64_t>(std::floor(p.z() / cell))};
}

}  // namespace

void LibraryObject::validate() const
{
  if (cloud.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "library object '" + id + "' has no points");
  }
  if (!(dims.x() > 0.0 && dims.y() > 0.0 && dims.z() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "library object '" + id + "' has non-positive dims");
  }
  const Vec3 limit = 0.5 * dims + Vec3::Constant(kExtentSlack);
  for (const Point & p : cloud.points()) {
    // float storage may round a boundary point outward by one ulp
    const double eps = 1e-5;
    if (std::abs(p.x) > limit.x() + eps || std::abs(p.y) > limit.y() + eps ||
      std::abs(p.z) > limit.z() + eps)
    {
      throw Error(
        ErrorCode::kInvalidArgument, "library object '" + id + "' has a point outside its extent");
    }
  }
}

void ObjectLibrary::add(LibraryObject object)
{
  if (!valid_id(object.id)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid library object id '" + object.id + "'");
  }
  if (!valid_field(object.category) || !valid_field(object.source_scan)) {
    throw Error(
      ErrorCode::kInvalidArgument,
      "library object '" + object.id + "' needs single-token category and source scan");
  }
  if (by_id_.count(object.id) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate library object id '" + object.id + "'");
  }
  object.validate();
  const std::size_t index = objects_.size();
  by_id_[object.id] = index;
  by_category_[object.category].push_back(index);
  objects_.push_back(std::move(object));
}

const LibraryObject & ObjectLibrary::get(const std::string & id) const
{
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::kUnknownObject, "library has no object '" + id + "'");
  }
  return objects_[it->second];
}

const std::vector<std::size_t> & ObjectLibrary::category(const std::string & name) const
{
  static const std::vector<std::size_t> kNone;
  const auto it = by_category_.find(name);
  return it == by_category_.end() ? kNone : it->second;
}

std::vector<std::string> ObjectLibrary::categories() const
{
  std::vector<std::string> names;
  for (const auto & [name, _] : by_category_) {
    names.push_back(name);
  }
  return names;
}

PointCloud extract_object(
  const PointCloud & scan, const BoundingBox & box, const ExtractOptions & options)
{
  std::vector<Point> points;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    if (!box_contains(box, scan[i], options.margin)) {
      continue;
    }
    if (scan.has_labels() && !options.classes.is_vehicle(scan.label(i))) {
      continue;
    }
    Point p = scan[i];
    const Vec3 q = box.to_box_frame(p.position());
    p.x = q.x();
    p.y = q.y();
    p.z = q.z();
    points.push_back(p);
  }
  if (points.size() < options.min_points) {
    throw Error(
      ErrorCode::kTooFewPoints, "object has " + std::to_string(points.size()) +
      " points (need " + std::to_string(options.min_points) + ")");
  }
  return PointCloud(std::move(points));
}

PointCloud mirror_complete(const PointCloud & canonical)
{
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> cells;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    cells[cell_of(canonical[i].position(), kMirrorTolerance)].push_back(i);
  }

  auto has_neighbor = [&](const Vec3 & q) {
      const CellKey c = cell_of(q, kMirrorTolerance);
      for (std::int64_t dx = -1; dx <= 1; ++dx) {
        for (std::int64_t dy = -1; dy <= 1; ++dy) {
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            const auto it = cells.find({c.x + dx, c.y + dy, c.z + dz});
            if (it == cells.end()) {
              continue;
            }
            for (const std::size_t j : it->second) {
              if ((canonical[j].position() - q).norm() <= kMirrorTolerance) {
                return true;
              }
            }
          }
        }
      }
      return false;
    };

  PointCloud out = canonical;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    Point m = canonical[i];
    m.y = -m.y;
    if (!has_neighbor(m.position())) {
      out.push_back(m, canonical.has_labels() ? canonical.label(i) : Label{0});
    }
  }
  return out;
}

LibraryObject build_library_object(
  const PointCloud & scan, const BoundingBox & box, const std::string & category,
  const std::string & id, const std::string & source_scan, const ExtractOptions & options,
  const CompletionFn & complete)
{
  PointCloud partial = extract_object(scan, box, options);
  partial.clear_labels();
  LibraryObject object;
  object.id = id;
  object.category = category;
  object.cloud = complete ? complete(partial) : partial;
  object.dims = box.size;
  object.source_scan = source_scan;
  object.completed = static_cast<bool>(complete);
  object.validate();
  return object;
}

void save_library(const ObjectLibrary & library, const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create library directory " + dir.string());
  }
  std::string manifest = std::string(kManifestHeader) + "\n";
  for (const auto & obj : library.objects()) {
    manifest += obj.id + '\t' + obj.category + '\t' + format_g9(obj.dims.x()) + '\t' +
      format_g9(obj.dims.y()) + '\t' + format_g9(obj.dims.z()) + '\t' + obj.source_scan + '\t' +
      (obj.completed ? "true" : "false") + '\n';
    save_scan(dir / (obj.id + ".bin"), obj.cloud);
  }
  write_file_text(dir / "manifest.tsv", manifest);
}

ObjectLibrary load_library(const std::filesystem::path & dir)
{
  const std::string text = read_file_text(dir / "manifest.tsv");
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) {
    throw Error(ErrorCode::kMalformedArchive, "library manifest has a bad header", 1);
  }
  ObjectLibrary library;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, '\t')) {
      fields.push_back(field);
    }
    auto fail = [&](const std::string & what) {
        return Error(
          ErrorCode::kMalformedArchive,
          "manifest line " + std::to_string(line_number) + ": " + what, line_number);
      };
    if (fields.size() != 7) {
      throw fail("expected 7 tab-separated fields");
    }
    LibraryObject obj;
    obj.id = fields[0];
    obj.category = fields[1];
    try {
      std::size_t used = 0;
      for (int k = 0; k < 3; ++k) {
        obj.dims[k] = std::stod(fields[2 + static_cast<std::size_t>(k)], &used);
        if (used != fields[2 + static_cast<std::size_t>(k)].size()) {
          throw fail("bad dimension");
        }
      }
    } catch (const std::invalid_argument &) {
      throw fail("bad dimension");
    } catch (const std::out_of_range &) {
      throw fail("bad dimension");
    }
    obj.source_scan = fields[5];
    if (fields[6] != "true" && fields[6] != "false") {
      throw fail("completed must be true or false");
    }
    obj.completed = fields[6] == "true";
    if (!valid_id(obj.id)) {
      throw fail("invalid object id");
    }
    obj.cloud = load_scan(dir / (obj.id + ".bin"));
    try {
      library.add(std::move(obj));
    } catch (const Error & e) {
      throw fail(e.what());
    }
  }
  return library;
}

const LibraryObject & ObjectSampler::sample(const std::string & category)
{
  const auto & members = library_.category(category);
  if (members.empty()) {
    throw Error(ErrorCode::kEmptyCategory, "library has no objects of category '" + category + "'");
  }
  return library_.objects()[members[uniform_index(rng_, members.size())]];
}

const LibraryObject & sample_object(
  const ObjectLibrary & library, const std::string & category, std::uint64_t seed)
{
  ObjectSampler sampler(library, seed);
  return sampler.sample(category);
}

BevMap::BevMap(double x_min, double y_min, double cell_size, int nx, int ny, bool fill)
: x_min_(x_min), y_min_(y_min), cell_(cell_size), nx_(nx), ny_(ny),
  cells_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), fill ? 1 : 0)
{
  if (!(cell_size > 0.0) || nx <= 0 || ny <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "BEV map needs a positive cell size and extent");
  }
}

BevMap BevMap::from_points(
  const PointCloud & cloud, std::span<const std::uint8_t> candidate, double cell_size)
{
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!candidate[i]) {
      continue;
    }
    const Point & p = cloud[i];
    if (!any) {
      x0 = x1 = p.x;
      y0 = y1 = p.y;
      any = true;
    }
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // World-aligned cells.
  x0 = std::floor(x0 / cell_size) * cell_size;
  y0 = std::floor(y0 / cell_size) * cell_size;
  const int nx = static_cast<int>(std::floor((x1 - x0) / cell_size)) + 1;
  const int ny = static_cast<int>(std::floor((y1 - y0) / cell_size)) + 1;
  BevMap map(x0, y0, cell_size, nx, ny);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (candidate[i]) {
      map.set(cloud[i].x, cloud[i].y);
    }
  }
  return map;
}

BevMap BevMap::ground_of(const PointCloud & cloud, const SemanticClassSets & classes, double cell_size)
{
  std::vector<std::uint8_t> flags(cloud.size(), 0);
  if (cloud.has_labels()) {
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      flags[i] = classes.is_ground(cloud.label(i)) ? 1 : 0;
    }
  }
  return from_points(cloud, flags, cell_size);
}

bool BevMap::at(double x, double y) const
{
  const double fx = std::floor((x - x_min_) / cell_);
  const double fy = std::floor((y - y_min_) / cell_);
  if (fx < 0.0 || fy < 0.0 || fx >= nx_ || fy >= ny_) {
    return false;
  }
  return cells_[static_cast<std::size_t>(fy) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(fx)] != 0;
}

void BevMap::set(double x, double y)
{
  const double fx = std::floor((x - x_min_) / cell_);
  const double fy = std::floor((y - y_min_) / cell_);
  if (fx < 0.0 || fy < 0.0 || fx >= nx_ || fy >= ny_) {
    return;
  }
  cells_[static_cast<std::size_t>(fy) * static_cast<std::size_t>(nx_) +
    static_cast<std::size_t>(fx)] = 1;
}

Pose2_5D perturb_pose(
  const Pose2_5D & pose, std::uint64_t seed, const BevMap & ground_bev,
  const PerturbOptions & options)
{
  if (options.max_translation < 0.0 || options.max_yaw < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation bounds must be non-negative");
  }
  Rng rng(seed);
  const double m = options.max_translation;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    double dx = 0.0;
    double dy = 0.0;
    do {
      dx = uniform(rng, -m, m);
      dy = uniform(rng, -m, m);
    } while (dx * dx + dy * dy > m * m);
    const double dyaw = uniform(rng, -options.max_yaw, options.max_yaw);
    if (ground_bev.at(pose.x + dx, pose.y + dy)) {
      return Pose2_5D(pose.x + dx, pose.y + dy, pose.yaw + dyaw);
    }
  }
  return pose;
}

}  // namespace scanedit
