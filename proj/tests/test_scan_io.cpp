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

#include "scanedit/error.hpp"
#include "scanedit/rng.hpp"
#include "scanedit/scan_io.hpp"

#include <doctest.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <sstream>

using namespace scanedit;

namespace
{

std::vector<std::byte> encode(std::initializer_list<float> values)
{
  std::vector<std::byte> out;
  for (const float v : values) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    for (int k = 0; k < 4; ++k) {
      out.push_back(static_cast<std::byte>((bits >> (8 * k)) & 0xFFu));
    }
  }
  return out;
}

std::vector<std::byte> bytes_of(std::initializer_list<int> values)
{
  std::vector<std::byte> out;
  for (const int v : values) {
    out.push_back(static_cast<std::byte>(v));
  }
  return out;
}

ErrorCode code_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("read_scan_bin")
{
  CHECK(read_scan_bin({}).empty());

  const PointCloud one = read_scan_bin(encode({1.0f, 2.0f, 3.0f, 0.5f, 7.0f}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].x == 1.0);
  CHECK(one[0].y == 2.0);
  CHECK(one[0].z == 3.0);
  CHECK(one[0].intensity == 0.5f);
  CHECK(one[0].ring == 7);

  const PointCloud no_ring = read_scan_bin(encode({1.0f, 2.0f, 3.0f, 0.0f, -1.0f}));
  CHECK_FALSE(no_ring[0].ring.has_value());

  auto odd = encode({1.0f, 2.0f, 3.0f, 0.5f});
  CHECK(code_of([&] {read_scan_bin(odd);}) == ErrorCode::kMalformedScan);
  const auto nan = encode({1.0f, std::numeric_limits<float>::quiet_NaN(), 3.0f, 0.5f, 1.0f});
  CHECK(code_of([&] {read_scan_bin(nan);}) == ErrorCode::kMalformedScan);
  const auto inf = encode({std::numeric_limits<float>::infinity(), 0.0f, 3.0f, 0.5f, 1.0f});
  CHECK(code_of([&] {read_scan_bin(inf);}) == ErrorCode::kMalformedScan);
}

TEST_CASE("scan round trip is byte identical")
{
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::byte> bytes;
    const auto n = uniform_index(rng, 300);
    for (std::size_t i = 0; i < n; ++i) {
      const float ring = uniform01(rng) < 0.1 ? -1.0f : static_cast<float>(uniform_index(rng, 32));
      const auto rec = encode(
        {static_cast<float>(uniform(rng, -80, 80)), static_cast<float>(uniform(rng, -80, 80)),
          static_cast<float>(uniform(rng, -5, 5)), static_cast<float>(uniform(rng, 0, 255)), ring});
      bytes.insert(bytes.end(), rec.begin(), rec.end());
    }
    CHECK(write_scan_bin(read_scan_bin(bytes)) == bytes);
  }
}

TEST_CASE("read_labels_bin")
{
  CHECK(read_labels_bin(bytes_of({24, 17, 24}), 3) == std::vector<Label>{24, 17, 24});
  CHECK(read_labels_bin({}, 0).empty());
  const auto two = bytes_of({1, 2});
  CHECK(code_of([&] {read_labels_bin(two, 3);}) == ErrorCode::kLabelLengthMismatch);
  const std::vector<Label> labels{0, 255, 17};
  CHECK(read_labels_bin(write_labels_bin(labels), 3) == labels);
}

TEST_CASE("boxes text")
{
  const auto boxes = read_boxes_text(std::string("0 0 0 4.2 1.8 1.6 0.0 car\n"));
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0].box.center == Vec3::Zero());
  CHECK(boxes[0].box.size == Vec3(4.2, 1.8, 1.6));
  CHECK(boxes[0].box.yaw == 0.0);
  CHECK(boxes[0].category == "car");

  CHECK(read_boxes_text(std::string()).empty());
  CHECK(read_boxes_text(std::string("# comment\n\n")).empty());

  try {
    read_boxes_text(std::string("0 0 0 4.2\n"));
    FAIL("expected MalformedBoxLine");
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::kMalformedBoxLine);
    CHECK(e.line() == 1);
  }
  try {
    read_boxes_text(std::string("1 2 3 4 5 6 0 car\n\n1 2 3 -4 5 6 0 car\n"));
    FAIL("expected MalformedBoxLine");
  } catch (const Error & e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(read_boxes_text(std::string("1 2 3 4 5 6 0 car extra\n")), Error);
  CHECK_THROWS_AS(read_boxes_text(std::string("1 2 x 4 5 6 0 car\n")), Error);
}

TEST_CASE("boxes text round trip is line identical")
{
  Rng rng(9);
  std::vector<LabeledBox> boxes;
  for (int i = 0; i < 100; ++i) {
    boxes.push_back(
      {BoundingBox(
          Vec3(uniform(rng, -50, 50), uniform(rng, -50, 50), uniform(rng, -3, 3)),
          Vec3(uniform(rng, 0.3, 12), uniform(rng, 0.3, 3), uniform(rng, 0.3, 4)),
          uniform(rng, -kPi, kPi)),
        i % 2 ? "car" : "pedestrian"});
  }
  const std::string text = write_boxes_text(boxes);
  const auto back = read_boxes_text(text);
  CHECK(write_boxes_text(back) == text);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    CHECK((back[i].box.center - boxes[i].box.center).norm() < 1e-6);
  }
}

TEST_CASE("ascii scans")
{
  std::istringstream in("1 2 3 0.5 4\n# c\n-1 0 2 0\n");
  const PointCloud c = read_scan_ascii(in);
  REQUIRE(c.size() == 2);
  CHECK(c[0].ring == 4);
  CHECK_FALSE(c[1].ring.has_value());
  std::istringstream again(write_scan_ascii(c));
  CHECK(read_scan_ascii(again) == c);
}

TEST_CASE("bundle files")
{
  const auto dir = std::filesystem::temp_directory_path() / "scanedit_test_scan_io";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  PointCloud c({Point{1, 2, 3, 0.5f, 1}, Point{4, 5, 6, 0.0f, 2}}, {24, 17});
  save_scan(dir / "s1.pcd.bin", c);
  write_file_bytes(dir / "s1.labels", write_labels_bin(c.labels()));
  const std::vector<LabeledBox> boxes{{BoundingBox(Vec3(4, 5, 6), Vec3(1, 1, 1), 0.0), "car"}};
  write_file_text(dir / "s1.boxes.txt", write_boxes_text(boxes));

  CHECK(scan_id_of(dir / "s1.pcd.bin") == "s1");
  CHECK(scan_id_of("a/b/x.bin") == "x");
  const ScanBundle b = load_bundle(BundlePaths::siblings_of(dir / "s1.pcd.bin"));
  CHECK(b.scan_id == "s1");
  CHECK(b.cloud == c);
  CHECK(b.boxes.size() == 1);

  CHECK(code_of([&] {load_scan(dir / "missing.bin");}) == ErrorCode::kIo);
  std::filesystem::remove_all(dir);
}
