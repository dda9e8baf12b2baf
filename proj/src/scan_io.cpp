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

#include "scanedit/scan_io.hpp"

#include "scanedit/error.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>

namespace scanedit
{

namespace
{

float load_f32_le(const std::byte * p)
{
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

void store_f32_le(float value, std::byte * p)
{
  const auto bits = std::bit_cast<std::uint32_t>(value);
  p[0] = static_cast<std::byte>(bits & 0xFF);
  p[1] = static_cast<std::byte>((bits >> 8) & 0xFF);
  p[2] = static_cast<std::byte>((bits >> 16) & 0xFF);
  p[3] = static_cast<std::byte>((bits >> 24) & 0xFF);
}

std::vector<std::string> split_ws(const std::string & line)
{
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

bool parse_double(const std::string & tok, double & out)
{
  const char * first = tok.data();
  const char * last = tok.data() + tok.size();
  if (first != last && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool skippable(const std::string & line)
{
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

PointCloud read_scan_bin(std::span<const std::byte> bytes)
{
  if (bytes.size() % kScanRecordBytes != 0) {
    throw Error(
      ErrorCode::kMalformedScan, "scan byte length " + std::to_string(bytes.size()) +
      " is not a multiple of " + std::to_string(kScanRecordBytes));
  }
  const std::size_t n = bytes.size() / kScanRecordBytes;
  std::vector<Point> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::byte * rec = bytes.data() + i * kScanRecordBytes;
    const float x = load_f32_le(rec);
    const float y = load_f32_le(rec + 4);
    const float z = load_f32_le(rec + 8);
    const float intensity = load_f32_le(rec + 12);
    const float ring = load_f32_le(rec + 16);
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z) ||
      !std::isfinite(intensity) || !std::isfinite(ring))
    {
      throw Error(ErrorCode::kMalformedScan, "non-finite value in record " + std::to_string(i));
    }
    Point & p = points[i];
    p.x = x;
    p.y = y;
    p.z = z;
    p.intensity = intensity;
    if (ring >= 0.0f) {
      p.ring = static_cast<std::int32_t>(std::lround(ring));
    }
  }
  return PointCloud(std::move(points));
}

std::vector<std::byte> write_scan_bin(const PointCloud & cloud)
{
  std::vector<std::byte> out(cloud.size() * kScanRecordBytes);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Point & p = cloud[i];
    std::byte * rec = out.data() + i * kScanRecordBytes;
    store_f32_le(static_cast<float>(p.x), rec);
    store_f32_le(static_cast<float>(p.y), rec + 4);
    store_f32_le(static_cast<float>(p.z), rec + 8);
    store_f32_le(p.intensity, rec + 12);
    store_f32_le(p.ring ? static_cast<float>(*p.ring) : -1.0f, rec + 16);
  }
  return out;
}

std::vector<Label> read_labels_bin(std::span<const std::byte> bytes, std::size_t n_points)
{
  if (bytes.size() != n_points) {
    throw Error(
      ErrorCode::kLabelLengthMismatch, "label file has " + std::to_string(bytes.size()) +
      " entries for " + std::to_string(n_points) + " points");
  }
  std::vector<Label> labels(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    labels[i] = static_cast<Label>(bytes[i]);
  }
  return labels;
}

std::vector<std::byte> write_labels_bin(std::span<const Label> labels)
{
  std::vector<std::byte> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = static_cast<std::byte>(labels[i]);
  }
  return out;
}

std::string format_g9(double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

LabeledBox parse_box_line(const std::string & line, std::size_t line_number)
{
  const auto tokens = split_ws(line);
  if (tokens.size() != 8) {
    throw Error(
      ErrorCode::kMalformedBoxLine,
      "box line " + std::to_string(line_number) + ": expected 8 fields, got " +
      std::to_string(tokens.size()), line_number);
  }
  double v[7];
  for (int i = 0; i < 7; ++i) {
    if (!parse_double(tokens[i], v[i])) {
      throw Error(
        ErrorCode::kMalformedBoxLine,
        "box line " + std::to_string(line_number) + ": bad number '" + tokens[i] + "'",
        line_number);
    }
  }
  if (!(v[3] > 0.0 && v[4] > 0.0 && v[5] > 0.0)) {
    throw Error(
      ErrorCode::kMalformedBoxLine,
      "box line " + std::to_string(line_number) + ": dimensions must be positive", line_number);
  }
  return LabeledBox{BoundingBox({v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6]), tokens[7]};
}

std::string format_box_line(const LabeledBox & b)
{
  const BoundingBox & box = b.box;
  std::string line;
  for (const double v : {box.center.x(), box.center.y(), box.center.z(), box.size.x(),
      box.size.y(), box.size.z(), box.yaw})
  {
    line += format_g9(v);
    line += ' ';
  }
  line += b.category;
  return line;
}

std::vector<LabeledBox> read_boxes_text(std::istream & in)
{
  std::vector<LabeledBox> boxes;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable(line)) {
      continue;
    }
    boxes.push_back(parse_box_line(line, line_number));
  }
  return boxes;
}

std::vector<LabeledBox> read_boxes_text(const std::string & text)
{
  std::istringstream in(text);
  return read_boxes_text(in);
}

std::string write_boxes_text(std::span<const LabeledBox> boxes)
{
  std::string out;
  for (const auto & b : boxes) {
    if (b.category.empty() || b.category.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "box category must be a single nonempty token");
    }
    out += format_box_line(b);
    out += '\n';
  }
  return out;
}

PointCloud read_scan_ascii(std::istream & in)
{
  std::vector<Point> points;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (skippable(line)) {
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.size() < 3 || tokens.size() > 5) {
      throw Error(
        ErrorCode::kMalformedScan, "ascii scan line " + std::to_string(line_number) +
        ": expected 3 to 5 fields", line_number);
    }
    double v[5] = {0.0, 0.0, 0.0, 0.0, -1.0};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!parse_double(tokens[i], v[i])) {
        throw Error(
          ErrorCode::kMalformedScan,
          "ascii scan line " + std::to_string(line_number) + ": bad number", line_number);
      }
    }
    Point p{v[0], v[1], v[2], static_cast<float>(v[3]), std::nullopt};
    if (v[4] >= 0.0) {
      p.ring = static_cast<std::int32_t>(std::lround(v[4]));
    }
    points.push_back(p);
  }
  return PointCloud(std::move(points));
}

std::string write_scan_ascii(const PointCloud & cloud)
{
  std::string out;
  for (const Point & p : cloud.points()) {
    out += format_g9(p.x) + ' ' + format_g9(p.y) + ' ' + format_g9(p.z) + ' ' +
      format_g9(p.intensity) + ' ' + std::to_string(p.ring.value_or(-1)) + '\n';
  }
  return out;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    bytes[i] = static_cast<std::byte>(raw[i]);
  }
  return bytes;
}

void write_file_bytes(const std::filesystem::path & path, std::span<const std::byte> bytes)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

std::string read_file_text(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_text(const std::filesystem::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

PointCloud load_scan(const std::filesystem::path & path)
{
  return read_scan_bin(read_file_bytes(path));
}

void save_scan(const std::filesystem::path & path, const PointCloud & cloud)
{
  write_file_bytes(path, write_scan_bin(cloud));
}

std::string scan_id_of(const std::filesystem::path & scan_path)
{
  std::string name = scan_path.filename().string();
  for (const std::string suffix : {".bin", ".pcd"}) {
    if (name.size() > suffix.size() &&
      name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
    {
      name.resize(name.size() - suffix.size());
    }
  }
  return name;
}

BundlePaths BundlePaths::siblings_of(const std::filesystem::path & scan)
{
  const auto dir = scan.parent_path();
  const std::string id = scan_id_of(scan);
  return BundlePaths{scan, dir / (id + ".labels"), dir / (id + ".boxes.txt")};
}

ScanBundle load_bundle(const BundlePaths & paths, const std::string & scan_id)
{
  ScanBundle bundle;
  bundle.scan_id = scan_id.empty() ? scan_id_of(paths.scan) : scan_id;
  bundle.cloud = load_scan(paths.scan);
  if (!paths.labels.empty() && std::filesystem::exists(paths.labels)) {
    bundle.cloud.set_labels(read_labels_bin(read_file_bytes(paths.labels), bundle.cloud.size()));
  }
  if (!paths.boxes.empty() && std::filesystem::exists(paths.boxes)) {
    std::ifstream in(paths.boxes);
    bundle.boxes = read_boxes_text(in);
  }
  return bundle;
}

}  // namespace scanedit
