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

#ifndef SCANEDIT__SCAN_IO_HPP_
#define SCANEDIT__SCAN_IO_HPP_

#include "scanedit/types.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scanedit
{

/// Size of one record in the binary scan format: five little-endian float32
/// (x, y, z, intensity, ring).
inline constexpr std::size_t kScanRecordBytes = 20;

struct LabeledBox
{
  BoundingBox box;
  std::string category;
};

/// One scan with its annotations, the unit of dataset ingestion.
struct ScanBundle
{
  PointCloud cloud;
  std::vector<LabeledBox> boxes;
  std::string scan_id;
};

/// Decodes a nuScenes-layout `.pcd.bin` buffer. A ring value below zero reads
/// as "no ring"; points without a ring are written back as -1.
PointCloud read_scan_bin(std::span<const std::byte> bytes);
std::vector<std::byte> write_scan_bin(const PointCloud & cloud);

/// One uint8 class id per point.
std::vector<Label> read_labels_bin(std::span<const std::byte> bytes, std::size_t n_points);
std::vector<std::byte> write_labels_bin(std::span<const Label> labels);

/// `cx cy cz dx dy dz yaw_rad category`, one box per line. Blank lines and
/// lines starting with '#' are skipped.
std::vector<LabeledBox> read_boxes_text(std::istream & in);
std::vector<LabeledBox> read_boxes_text(const std::string & text);
std::string write_boxes_text(std::span<const LabeledBox> boxes);

/// Parses one box line; `line_number` is reported in MalformedBoxLine.
LabeledBox parse_box_line(const std::string & line, std::size_t line_number);
std::string format_box_line(const LabeledBox & box);

/// `x y z intensity ring` per line; ring may be omitted. For hand-written
/// fixtures.
PointCloud read_scan_ascii(std::istream & in);
std::string write_scan_ascii(const PointCloud & cloud);

std::vector<std::byte> read_file_bytes(const std::filesystem::path & path);
void write_file_bytes(const std::filesystem::path & path, std::span<const std::byte> bytes);
std::string read_file_text(const std::filesystem::path & path);
void write_file_text(const std::filesystem::path & path, const std::string & text);

PointCloud load_scan(const std::filesystem::path & path);
void save_scan(const std::filesystem::path & path, const PointCloud & cloud);

/// Loads `<stem>.bin` plus the optional `<stem>.labels` and `<stem>.boxes.txt`
/// siblings. Explicit paths override the sibling lookup.
struct BundlePaths
{
  std::filesystem::path scan;
  std::filesystem::path labels;
  std::filesystem::path boxes;

  static BundlePaths siblings_of(const std::filesystem::path & scan);
};
ScanBundle load_bundle(const BundlePaths & paths, const std::string & scan_id = {});

/// Scan id of a path: the file name with `.bin` (and a `.pcd` before it)
/// stripped.
std::string scan_id_of(const std::filesystem::path & scan_path);

/// Formats a double with 9 significant digits, the precision of text formats.
std::string format_g9(double value);

}  // namespace scanedit

#endif  // SCANEDIT__SCAN_IO_HPP_
