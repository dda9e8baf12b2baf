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

#include "scanedit/cli/commands.hpp"
#include "scanedit/cli/edit_config.hpp"
#include "scanedit/error.hpp"
#include "scanedit/object_library.hpp"
#include "scanedit/scan_io.hpp"
#include "scanedit/simulator.hpp"

#include "scenes.hpp"

#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <map>
#include <sstream>
#include <string>

using namespace scanedit;
namespace fs = std::filesystem;

namespace
{

/// Fresh directory under the system temp dir, removed on scope exit.
struct TempDir
{
  TempDir()
  {
    std::string tmpl = (fs::temp_directory_path() / "scanedit-cli-XXXXXX").string();
    REQUIRE(mkdtemp(tmpl.data()) != nullptr);
    path = tmpl;
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

struct Run
{
  int code = 0;
  std::string out;
  std::string err;
};

/// Mirrors the tool's error-to-exit-code mapping.
template<class Args, class Fn>
Run run(Fn fn, const Args & args)
{
  Run r;
  std::ostringstream out, err;
  try {
    r.code = fn(args, out, err);
  } catch (const Error & e) {
    err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    r.code = cli::exit_code_for(e.code());
  }
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::map<std::string, std::string> dir_contents(const fs::path & dir)
{
  std::map<std::string, std::string> files;
  for (const auto & e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = read_file_text(e.path());
    }
  }
  return files;
}

std::size_t config_error_line(const std::string & yaml)
{
  try {
    cli::parse_edit_config(yaml);
  } catch (const Error & e) {
    CHECK(e.code() == ErrorCode::kConfig);
    return e.line();
  }
  FAIL("expected a Config error");
  return 0;
}

/// Simulated scene with two cars, written as `scene.txt` and simulated into `sim/`.
void simulate_fixture(const fs::path & root)
{
  AnalyticScene scene;
  scene.objects.push_back({BoundingBox(Vec3(12, 3, -1.8 + 0.15 + 0.75), Vec3(4.4, 1.9, 1.5), 0.3), "car"});
  scene.objects.push_back({BoundingBox(Vec3(-9, -8, -1.8 + 0.15 + 0.8), Vec3(4.2, 1.8, 1.6), 2.0), "car"});
  write_file_text(root / "scene.txt", write_scene_text(scene));
  cli::SimulateArgs args;
  args.scene = root / "scene.txt";
  args.output = root / "sim";
  const Run r = run(cli::cmd_simulate, args);
  REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("exit codes are distinct")
{
  std::map<int, int> seen;
  for (int c = 0; c <= static_cast<int>(ErrorCode::kConfig); ++c) {
    const int exit = cli::exit_code_for(static_cast<ErrorCode>(c));
    CHECK(exit != cli::kExitOk);
    CHECK(exit != cli::kExitUsage);
    CHECK(exit != cli::kExitInternal);
    CHECK(++seen[exit] == 1);
  }
  CHECK(cli::exit_code_for(ErrorCode::kNoGroundPoints) == 37);
  CHECK(cli::exit_code_table().find("NoGroundPoints") != std::string::npos);
}

TEST_CASE("edit config parsing")
{
  const cli::EditConfig cfg = cli::parse_edit_config(
    "version: 1\n"
    "scan: in/a.bin\n"
    "library: lib\n"
    "output: out\n"
    "seed: 42\n"
    "inpainter: ground_extrapolation\n"
    "grid: {n_r: 256, phi_min_deg: 80}\n"
    "perturb: {max_translation: 1.5, max_yaw_deg: 30}\n"
    "removals:\n"
    "  - box: 1\n"
    "  - category: truck\n"
    "insertions:\n"
    "  - object: a_0\n"
    "    x: 10\n"
    "    y: -2\n"
    "    yaw_deg: 90\n"
    "  - category: car\n"
    "    from_box: 0\n"
    "    perturb: true\n",
    "/base");
  REQUIRE(cfg.inputs.size() == 1);
  CHECK(cfg.inputs[0].scan == fs::path("/base/in/a.bin"));
  CHECK(cfg.inputs[0].labels == fs::path("/base/in/a.labels"));
  CHECK(cfg.inputs[0].boxes == fs::path("/base/in/a.boxes.txt"));
  CHECK(cfg.library == fs::path("/base/lib"));
  CHECK(cfg.plan.seed == 42);
  CHECK(cfg.plan.inpainter == "ground_extrapolation");
  CHECK(cfg.grid.n_r == 256);
  CHECK(cfg.grid.n_theta == 512);
  CHECK(cfg.grid.phi_min == 80.0);
  CHECK(cfg.plan.perturb.max_translation == 1.5);
  CHECK(cfg.plan.perturb.max_yaw == doctest::Approx(deg_to_rad(30.0)));
  REQUIRE(cfg.plan.removals.size() == 2);
  CHECK(std::get<RemoveBox>(cfg.plan.removals[0]).box == 1);
  CHECK(std::get<RemoveCategory>(cfg.plan.removals[1]).category == "truck");
  REQUIRE(cfg.plan.insertions.size() == 2);
  CHECK(std::get<ObjectById>(cfg.plan.insertions[0].object).id == "a_0");
  const auto pose = std::get<Pose2_5D>(cfg.plan.insertions[0].pose);
  CHECK(pose.x == 10.0);
  CHECK(pose.yaw == doctest::Approx(kPi / 2));
  CHECK(std::get<PoseFromBox>(cfg.plan.insertions[1].pose).perturb);

  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ncolour: red\n") == 4);
  CHECK(config_error_line("scan: a.bin\noutput: o\n") == 1);
  CHECK(config_error_line("version: 2\nscan: a.bin\noutput: o\n") == 1);
  CHECK(config_error_line("version: 1\nscan: a.bin\n") == 1);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ngrid:\n  n_r: many\n") == 5);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ngrid: {n_r: 0}\n") == 4);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\nremovals:\n  - box: 1\n    category: car\n") == 5);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ninsertions:\n  - category: car\n    x: 1\n") == 5);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ninsertions:\n  - category: car\n    from_box: 0\n    wheels: 4\n") == 7);
  CHECK(config_error_line("version: 1\nscan: a.bin\noutput: o\ninpainter: diffusion\n") == 4);

  try {
    cli::parse_edit_config("version: 1\nscan: a.bin\noutput: o\ngrid: {n_phi: 32, depth: 3}\n");
    FAIL("expected a Config error");
  } catch (const Error & e) {
    CHECK(std::string(e.what()).find("grid.depth") != std::string::npos);
  }
}

TEST_CASE("simulate")
{
  TempDir tmp;
  write_file_text(tmp.path / "empty.txt", "ground 0 0 -1.8\n");
  cli::SimulateArgs args;
  args.scene = tmp.path / "empty.txt";
  args.output = tmp.path / "out";
  args.id = "flat";
  REQUIRE(run(cli::cmd_simulate, args).code == 0);
  const ScanBundle flat = load_bundle(BundlePaths::siblings_of(tmp.path / "out" / "flat.bin"));
  CHECK(flat.cloud.size() > 0);
  CHECK(flat.boxes.empty());
  for (std::size_t i = 0; i < flat.cloud.size(); ++i) {
    CHECK(flat.cloud.label(i) == 24);
  }

  simulate_fixture(tmp.path);
  const ScanBundle sim = load_bundle(BundlePaths::siblings_of(tmp.path / "sim" / "sim.bin"));
  CHECK(sim.boxes.size() == 2);
  CHECK(sim.boxes[0].category == "car");

  cli::SimulateArgs paired = args;
  paired.scene = tmp.path / "scene.txt";
  paired.id = "p";
  paired.pair = 1;
  REQUIRE(run(cli::cmd_simulate, paired).code == 0);
  const ScanBundle without = load_bundle(BundlePaths::siblings_of(tmp.path / "out" / "p_without.bin"));
  CHECK(without.boxes.size() == 1);
  const PointCloud revealed = load_scan(tmp.path / "out" / "p_revealed.bin");
  CHECK(revealed.size() > 0);
  CHECK(fs::exists(tmp.path / "out" / "p_revealed.labels"));

  paired.pair = 5;
  CHECK(run(cli::cmd_simulate, paired).code == cli::exit_code_for(ErrorCode::kInvalidArgument));
  args.scene = tmp.path / "missing.txt";
  CHECK(run(cli::cmd_simulate, args).code == cli::exit_code_for(ErrorCode::kIo));
}

TEST_CASE("build-library")
{
  TempDir tmp;
  cli::BuildLibraryArgs none;
  none.output = tmp.path / "empty_lib";
  REQUIRE(run(cli::cmd_build_library, none).code == 0);
  CHECK(load_library(none.output).empty());
  CHECK_FALSE(dir_contents(none.output).empty());

  simulate_fixture(tmp.path);
  cli::BuildLibraryArgs one;
  one.scans = {tmp.path / "sim" / "sim.bin"};
  one.output = tmp.path / "lib";
  const Run r = run(cli::cmd_build_library, one);
  REQUIRE(r.code == 0);
  const ObjectLibrary lib = load_library(one.output);
  REQUIRE(lib.size() == 2);
  CHECK(lib.get("sim_0").completed);
  CHECK(lib.get("sim_0").category == "car");
  CHECK(r.out.find("car 2") != std::string::npos);

  cli::BuildLibraryArgs again = one;
  again.output = tmp.path / "lib2";
  REQUIRE(run(cli::cmd_build_library, again).code == 0);
  CHECK(dir_contents(one.output) == dir_contents(again.output));

  // A box far from any point is skipped, not fatal.
  write_file_text(tmp.path / "far.boxes.txt", "40 40 0 2 2 2 0 car\n");
  cli::BuildLibraryArgs skip = one;
  skip.boxes = tmp.path / "far.boxes.txt";
  skip.output = tmp.path / "lib3";
  const Run s = run(cli::cmd_build_library, skip);
  CHECK(s.code == 0);
  CHECK(s.err.find("skip sim_0") != std::string::npos);
  CHECK(load_library(skip.output).empty());

  cli::BuildLibraryArgs missing = one;
  missing.scans = {tmp.path / "nope.bin"};
  missing.output = tmp.path / "lib4";
  CHECK(run(cli::cmd_build_library, missing).code == cli::exit_code_for(ErrorCode::kIo));
}

TEST_CASE("edit")
{
  TempDir tmp;
  simulate_fixture(tmp.path);
  cli::BuildLibraryArgs lib;
  lib.scans = {tmp.path / "sim" / "sim.bin"};
  lib.output = tmp.path / "lib";
  REQUIRE(run(cli::cmd_build_library, lib).code == 0);

  SUBCASE("empty plan") {
    write_file_text(tmp.path / "empty.yaml", "version: 1\nscan: sim/sim.bin\noutput: out\n");
    const Run r = run(cli::cmd_edit, cli::EditArgs{tmp.path / "empty.yaml", 1});
    REQUIRE(r.code == 0);
    CHECK(
      read_file_text(tmp.path / "out" / "sim.edited.bin") ==
      read_file_text(tmp.path / "sim" / "sim.bin"));
    CHECK(
      read_file_text(tmp.path / "out" / "sim.edited.labels") ==
      read_file_text(tmp.path / "sim" / "sim.labels"));
    CHECK(
      read_file_text(tmp.path / "out" / "sim.edited.boxes.txt") ==
      read_file_text(tmp.path / "sim" / "sim.boxes.txt"));
    const std::string prov = read_file_text(tmp.path / "out" / "sim.edited.provenance");
    CHECK(prov == std::string(load_scan(tmp.path / "sim" / "sim.bin").size(), '\0'));
    CHECK(r.out.find("removed 0, inpainted 0, inserted 0") != std::string::npos);
  }

  SUBCASE("missing labels with an insertion") {
    fs::copy_file(tmp.path / "sim" / "sim.bin", tmp.path / "bare.bin");
    write_file_text(
      tmp.path / "bare.yaml",
      "version: 1\nscan: bare.bin\nlibrary: lib\noutput: out\n"
      "insertions:\n  - object: sim_0\n    x: 8\n    y: 8\n");
    const Run r = run(cli::cmd_edit, cli::EditArgs{tmp.path / "bare.yaml", 1});
    CHECK(r.code == cli::exit_code_for(ErrorCode::kNoGroundPoints));
    CHECK(r.err.find("step insertion 0") != std::string::npos);
  }

  SUBCASE("deterministic outputs") {
    const std::string plan =
      "scan: sim/sim.bin\nlibrary: lib\nseed: 9\n"
      "removals:\n  - box: 0\n"
      "insertions:\n  - category: car\n    from_box: 0\n    perturb: true\n"
      "  - object: sim_1\n    x: -15\n    y: 6\n    yaw_deg: 45\n";
    write_file_text(tmp.path / "a.yaml", "version: 1\noutput: out_a\n" + plan);
    write_file_text(tmp.path / "b.yaml", "version: 1\noutput: out_b\n" + plan);
    const Run a = run(cli::cmd_edit, cli::EditArgs{tmp.path / "a.yaml", 1});
    const Run b = run(cli::cmd_edit, cli::EditArgs{tmp.path / "b.yaml", 2});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(dir_contents(tmp.path / "out_a") == dir_contents(tmp.path / "out_b"));
    CHECK(a.out.find("removal 0") != std::string::npos);
    CHECK(a.out.find("insertion 1") != std::string::npos);

    const ScanBundle edited = load_bundle(BundlePaths::siblings_of(tmp.path / "out_a" / "sim.edited.bin"));
    CHECK(edited.boxes.size() == 3);
    std::istringstream inserted(read_file_text(tmp.path / "out_a" / "sim.edited.inserted.boxes.txt"));
    CHECK(read_boxes_text(inserted).size() == 2);
    CHECK(read_file_text(tmp.path / "out_a" / "sim.edited.provenance").size() == edited.cloud.size());
  }

  SUBCASE("batch with a failing input") {
    fs::copy_file(tmp.path / "sim" / "sim.bin", tmp.path / "bare.bin");
    write_file_text(
      tmp.path / "batch.yaml",
      "version: 1\nlibrary: lib\noutput: out\n"
      "inputs:\n  - scan: sim/sim.bin\n  - scan: bare.bin\n"
      "insertions:\n  - object: sim_0\n    x: 8\n    y: 8\n");
    const Run r = run(cli::cmd_edit, cli::EditArgs{tmp.path / "batch.yaml", 2});
    CHECK(r.code == cli::exit_code_for(ErrorCode::kNoGroundPoints));
    CHECK(fs::exists(tmp.path / "out" / "sim.edited.bin"));
    CHECK_FALSE(fs::exists(tmp.path / "out" / "bare.edited.bin"));
  }

  SUBCASE("config errors") {
    write_file_text(tmp.path / "bad.yaml", "version: 1\nscan: sim/sim.bin\noutput: out\nextra: 1\n");
    const Run r = run(cli::cmd_edit, cli::EditArgs{tmp.path / "bad.yaml", 1});
    CHECK(r.code == cli::exit_code_for(ErrorCode::kConfig));
    CHECK(r.err.find("line 4") != std::string::npos);
    CHECK(run(cli::cmd_edit, cli::EditArgs{tmp.path / "nope.yaml", 1}).code == cli::exit_code_for(ErrorCode::kIo));
  }
}

TEST_CASE("evaluate")
{
  TempDir tmp;
  simulate_fixture(tmp.path);
  cli::EvaluateArgs args;
  args.pred = tmp.path / "sim" / "sim.bin";
  args.ref = tmp.path / "sim" / "sim.bin";
  const Run same = run(cli::cmd_evaluate, args);
  REQUIRE(same.code == 0);
  CHECK(same.out.find("jsd\t0\tlog_base=2.71828") != std::string::npos);
  CHECK(same.out.find("mmd\t0\tkernel=gaussian;bandwidth=1") != std::string::npos);
  CHECK(same.out.find("chamfer\t0\t") != std::string::npos);

  VoxelVolume region(args.grid);
  for (int it = 0; it < 40; ++it) {
    for (int ip = 0; ip < args.grid.n_phi; ++ip) {
      region.set_range(ray_index(it, ip, args.grid), 0, args.grid.n_r);
    }
  }
  write_file_text(tmp.path / "region.txt", write_grid_dump(region));
  args.region = tmp.path / "region.txt";
  args.log_base = 2.0;
  const Run masked = run(cli::cmd_evaluate, args);
  REQUIRE(masked.code == 0);
  CHECK(masked.out.find("log_base=2;") != std::string::npos);
  CHECK(masked.out.find("\t" + std::to_string(40 * args.grid.n_r) + "\n") != std::string::npos);

  args.ref = tmp.path / "missing.bin";
  CHECK(run(cli::cmd_evaluate, args).code == cli::exit_code_for(ErrorCode::kIo));
}

TEST_CASE("mask-eval")
{
  TempDir tmp;
  simulate_fixture(tmp.path);
  cli::MaskEvalArgs args;
  args.scans = {tmp.path / "sim" / "sim.bin"};
  const Run r = run(cli::cmd_mask_eval, args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("evaluated 1") != std::string::npos);
  CHECK(r.out.find("tiling.jsd_mean") != std::string::npos);
  CHECK(r.out.find("ground_extrapolation.chamfer_mean") != std::string::npos);
  CHECK(r.out.find("ground_extrapolation.outside_mask\t0\t") != std::string::npos);
  CHECK(r.out.find("tiling.outside_mask\t0\t") != std::string::npos);

  args.category = "bus";
  CHECK(run(cli::cmd_mask_eval, args).code == cli::exit_code_for(ErrorCode::kConfig));
}
