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

#include <CLI11.hpp>

#include <iostream>

namespace
{

void add_grid_flags(CLI::App & cmd, scanedit::GridConfig & grid)
{
  cmd.add_option("--n-r", grid.n_r, "Radial bins")->capture_default_str();
  cmd.add_option("--n-theta", grid.n_theta, "Azimuth bins")->capture_default_str();
  cmd.add_option("--n-phi", grid.n_phi, "Inclination bins")->capture_default_str();
  cmd.add_option("--r-max", grid.r_max, "Grid range in meters")->capture_default_str();
  cmd.add_option("--phi-min", grid.phi_min, "Inclination lower edge, degrees from +z")
  ->capture_default_str();
  cmd.add_option("--phi-max", grid.phi_max, "Inclination upper edge, degrees from +z")
  ->capture_default_str();
}

}  // namespace

int main(int argc, char ** argv)
{
  namespace cli = scanedit::cli;

  CLI::App app{"Spherical-voxel LiDAR scene editing toolkit"};
  app.require_subcommand(1);
  app.footer("Exit codes:\n" + cli::exit_code_table());

  cli::EditArgs edit;
  auto * edit_cmd = app.add_subcommand("edit", "Apply an edit plan (YAML config) to one or more scans");
  edit_cmd->add_option("config", edit.config, "Edit config file")->required()->check(CLI::ExistingFile);
  edit_cmd->add_option("--jobs,-j", edit.jobs, "Scans edited in parallel")->capture_default_str();

  cli::BuildLibraryArgs lib;
  auto * lib_cmd = app.add_subcommand("build-library", "Extract and complete annotated objects into an archive");
  lib_cmd->add_option("scans", lib.scans, "Scan files; boxes are read from <id>.boxes.txt");
  lib_cmd->add_option("--boxes", lib.boxes, "Boxes file (single scan only)");
  lib_cmd->add_option("--output,-o", lib.output, "Archive directory")->required();
  lib_cmd->add_option("--margin", lib.margin, "Box margin in meters")->capture_default_str();
  lib_cmd->add_option("--min-points", lib.min_points, "Smallest usable object")->capture_default_str();
  lib_cmd->add_option("--category", lib.categories, "Only these categories (repeatable)");
  bool no_complete = false;
  lib_cmd->add_flag("--no-complete", no_complete, "Skip mirror completion");

  cli::SimulateArgs sim;
  auto * sim_cmd = app.add_subcommand("simulate", "Ray-cast an analytic scene file");
  sim_cmd->add_option("scene", sim.scene, "Scene file")->required();
  sim_cmd->add_option("--output,-o", sim.output, "Output directory")->required();
  sim_cmd->add_option("--id", sim.id, "Output file stem")->capture_default_str();
  sim_cmd->add_option("--pair", sim.pair, "Also emit the scan without object N and the revealed points");
  sim_cmd->add_option("--noise", sim.noise_sigma, "Gaussian range noise sigma in meters")
  ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  add_grid_flags(*sim_cmd, sim.grid);

  cli::EvaluateArgs eval;
  auto * eval_cmd = app.add_subcommand("evaluate", "Compare a predicted scan against a reference");
  eval_cmd->add_option("pred", eval.pred, "Predicted scan")->required();
  eval_cmd->add_option("ref", eval.ref, "Reference scan")->required();
  eval_cmd->add_option("--region", eval.region, "Grid dump limiting the comparison");
  eval_cmd->add_option("--log-base", eval.log_base, "JSD logarithm base")->capture_default_str();
  eval_cmd->add_option("--bandwidth", eval.bandwidth, "MMD kernel sigma (default: median heuristic)");
  add_grid_flags(*eval_cmd, eval.grid);

  cli::MaskEvalArgs mask;
  std::vector<double> box_size;
  auto * mask_cmd = app.add_subcommand("mask-eval", "Score inpainters on synthetic masks over a scan list");
  mask_cmd->add_option("scans", mask.scans, "Scan files (labels and boxes read from siblings)")
  ->required();
  mask_cmd->add_option("--inpainter", mask.inpainters, "Inpainters to score (repeatable)")
  ->capture_default_str();
  mask_cmd->add_option("--box-size", box_size, "Box length width height (default: category mean)")
  ->expected(3);
  mask_cmd->add_option("--category", mask.category, "Category averaged for the box size")
  ->capture_default_str();
  mask_cmd->add_option("--distance", mask.distance, "Box range in meters")->capture_default_str();
  mask_cmd->add_option("--step", mask.step_deg, "Azimuth sweep step in degrees")->capture_default_str();
  mask_cmd->add_option("--log-base", mask.log_base, "JSD logarithm base")->capture_default_str();
  mask_cmd->add_option("--bandwidth", mask.bandwidth, "MMD kernel sigma (default: median heuristic)");
  add_grid_flags(*mask_cmd, mask.grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitUsage;
  }

  try {
    if (edit_cmd->parsed()) {
      return cli::cmd_edit(edit, std::cout, std::cerr);
    }
    if (lib_cmd->parsed()) {
      lib.complete = !no_complete;
      return cli::cmd_build_library(lib, std::cout, std::cerr);
    }
    if (sim_cmd->parsed()) {
      return cli::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (eval_cmd->parsed()) {
      return cli::cmd_evaluate(eval, std::cout, std::cerr);
    }
    if (mask_cmd->parsed()) {
      if (!box_size.empty()) {
        mask.box_size = scanedit::Vec3(box_size[0], box_size[1], box_size[2]);
      }
      return cli::cmd_mask_eval(mask, std::cout, std::cerr);
    }
  } catch (const scanedit::Error & e) {
    std::cerr << "error [" << scanedit::error_code_name(e.code()) << "]: " << e.what() << "\n";
    return cli::exit_code_for(e.code());
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitInternal;
  }
  return cli::kExitUsage;
}
