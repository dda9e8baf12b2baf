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

#include "scanedit/cli/edit_config.hpp"

#include "scanedit/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

namespace scanedit::cli
{

namespace
{

std::size_t line_of(const YAML::Node & node) { return static_cast<std::size_t>(node.Mark().line + 1); }

[[noreturn]] void fail(const YAML::Node & node, const std::string & field, const std::string & why)
{
  const std::size_t line = line_of(node);
  throw Error(
    ErrorCode::kConfig, "line " + std::to_string(line) + ": field '" + field + "': " + why, line);
}

void require_map(const YAML::Node & node, const std::string & field)
{
  if (!node.IsMap()) {
    fail(node, field, "expected a mapping");
  }
}

void reject_unknown(
  const YAML::Node & node, const std::string & where, std::initializer_list<const char *> allowed)
{
  const std::set<std::string> known(allowed.begin(), allowed.end());
  for (const auto & kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) {
      fail(kv.first, where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

template<class T>
T get(const YAML::Node & node, const std::string & field)
{
  if (!node.IsScalar()) {
    fail(node, field, "expected a scalar");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception &) {
    fail(node, field, "cannot read '" + node.Scalar() + "'");
  }
}

double get_finite(const YAML::Node & node, const std::string & field)
{
  const double v = get<double>(node, field);
  if (!std::isfinite(v)) {
    fail(node, field, "must be finite");
  }
  return v;
}

std::filesystem::path get_path(
  const YAML::Node & node, const std::string & field, const std::filesystem::path & base)
{
  const std::filesystem::path p = get<std::string>(node, field);
  if (p.empty()) {
    fail(node, field, "empty path");
  }
  return p.is_absolute() || base.empty() ? p : base / p;
}

std::size_t get_index(const YAML::Node & node, const std::string & field)
{
  const long long v = get<long long>(node, field);
  if (v < 0) {
    fail(node, field, "must be non-negative");
  }
  return static_cast<std::size_t>(v);
}

std::set<int> get_label_set(const YAML::Node & node, const std::string & field)
{
  if (!node.IsSequence()) {
    fail(node, field, "expected a list of class ids");
  }
  std::set<int> ids;
  for (const auto & item : node) {
    const int v = get<int>(item, field);
    if (v < 0 || v > 255) {
      fail(item, field, "class ids are 0..255");
    }
    ids.insert(v);
  }
  return ids;
}

EditInput parse_input(const YAML::Node & node, const std::string & where, const std::filesystem::path & base)
{
  auto field = [&](const char * key) {return where.empty() ? std::string(key) : where + "." + key;};
  EditInput in;
  if (!node["scan"]) {
    fail(node, field("scan"), "missing");
  }
  in.scan = get_path(node["scan"], field("scan"), base);
  const BundlePaths siblings = BundlePaths::siblings_of(in.scan);
  in.labels = node["labels"] ? get_path(node["labels"], field("labels"), base) : siblings.labels;
  in.boxes = node["boxes"] ? get_path(node["boxes"], field("boxes"), base) : siblings.boxes;
  return in;
}

void parse_grid(const YAML::Node & node, GridConfig & grid)
{
  require_map(node, "grid");
  reject_unknown(node, "grid", {"n_r", "n_theta", "n_phi", "r_max", "phi_min_deg", "phi_max_deg"});
  if (node["n_r"]) {grid.n_r = get<int>(node["n_r"], "grid.n_r");}
  if (node["n_theta"]) {grid.n_theta = get<int>(node["n_theta"], "grid.n_theta");}
  if (node["n_phi"]) {grid.n_phi = get<int>(node["n_phi"], "grid.n_phi");}
  if (node["r_max"]) {grid.r_max = get_finite(node["r_max"], "grid.r_max");}
  if (node["phi_min_deg"]) {grid.phi_min = get_finite(node["phi_min_deg"], "grid.phi_min_deg");}
  if (node["phi_max_deg"]) {grid.phi_max = get_finite(node["phi_max_deg"], "grid.phi_max_deg");}
  try {
    grid.validate();
  } catch (const Error & e) {
    fail(node, "grid", e.what());
  }
}

Removal parse_removal(const YAML::Node & node, const std::string & where)
{
  require_map(node, where);
  reject_unknown(node, where, {"box", "category"});
  if (static_cast<bool>(node["box"]) == static_cast<bool>(node["category"])) {
    fail(node, where, "give exactly one of 'box' or 'category'");
  }
  if (node["box"]) {
    return RemoveBox{get_index(node["box"], where + ".box")};
  }
  return RemoveCategory{get<std::string>(node["category"], where + ".category")};
}

Insertion parse_insertion(const YAML::Node & node, const std::string & where)
{
  require_map(node, where);
  reject_unknown(node, where, {"object", "category", "x", "y", "yaw_deg", "from_box", "perturb"});
  Insertion ins{ObjectById{}, Pose2_5D{}};
  if (static_cast<bool>(node["object"]) == static_cast<bool>(node["category"])) {
    fail(node, where, "give exactly one of 'object' or 'category'");
  }
  if (node["object"]) {
    ins.object = ObjectById{get<std::string>(node["object"], where + ".object")};
  } else {
    ins.object = ObjectFromCategory{get<std::string>(node["category"], where + ".category")};
  }

  const bool explicit_pose = node["x"] || node["y"] || node["yaw_deg"];
  if (explicit_pose == static_cast<bool>(node["from_box"])) {
    fail(node, where, "give either x/y/yaw_deg or from_box");
  }
  if (explicit_pose) {
    if (!node["x"] || !node["y"]) {
      fail(node, where, "x and y are both required");
    }
    if (node["perturb"]) {
      fail(node["perturb"], where + ".perturb", "only valid with from_box");
    }
    const double yaw = node["yaw_deg"] ? get_finite(node["yaw_deg"], where + ".yaw_deg") : 0.0;
    ins.pose = Pose2_5D(
      get_finite(node["x"], where + ".x"), get_finite(node["y"], where + ".y"), deg_to_rad(yaw));
  } else {
    PoseFromBox from;
    from.box = get_index(node["from_box"], where + ".from_box");
    from.perturb = node["perturb"] ? get<bool>(node["perturb"], where + ".perturb") : false;
    ins.pose = from;
  }
  return ins;
}

}  // namespace

EditConfig parse_edit_config(const std::string & yaml_text, const std::filesystem::path & base_dir)
{
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception & e) {
    const std::size_t line = static_cast<std::size_t>(e.mark.line + 1);
    throw Error(ErrorCode::kConfig, "line " + std::to_string(line) + ": " + e.msg, line);
  }
  if (!root.IsMap()) {
    throw Error(ErrorCode::kConfig, "config must be a mapping", 1);
  }
  reject_unknown(
    root, "", {"version", "scan", "labels", "boxes", "inputs", "library", "output", "grid",
      "inpainter", "seed", "margin", "inpainted_label", "ground_from_inpainted", "ground_ids",
      "vehicle_ids", "category_labels", "bev_cell", "perturb", "ground_extrapolation", "removals",
      "insertions"});

  EditConfig cfg;
  if (!root["version"]) {
    throw Error(ErrorCode::kConfig, "line 1: field 'version': missing (expected 1)", 1);
  }
  cfg.version = get<int>(root["version"], "version");
  if (cfg.version != 1) {
    fail(root["version"], "version", "unsupported version " + std::to_string(cfg.version));
  }

  if (root["inputs"]) {
    if (root["scan"] || root["labels"] || root["boxes"]) {
      fail(root["inputs"], "inputs", "cannot be combined with top-level scan/labels/boxes");
    }
    if (!root["inputs"].IsSequence()) {
      fail(root["inputs"], "inputs", "expected a list");
    }
    for (std::size_t i = 0; i < root["inputs"].size(); ++i) {
      const YAML::Node item = root["inputs"][i];
      const std::string where = "inputs[" + std::to_string(i) + "]";
      require_map(item, where);
      reject_unknown(item, where, {"scan", "labels", "boxes"});
      cfg.inputs.push_back(parse_input(item, where, base_dir));
    }
  } else if (root["scan"]) {
    cfg.inputs.push_back(parse_input(root, "", base_dir));
  } else {
    throw Error(ErrorCode::kConfig, "line 1: field 'scan': missing (or give 'inputs')", 1);
  }

  if (!root["output"]) {
    throw Error(ErrorCode::kConfig, "line 1: field 'output': missing", 1);
  }
  cfg.output = get_path(root["output"], "output", base_dir);
  if (root["library"]) {
    cfg.library = get_path(root["library"], "library", base_dir);
  }
  if (root["grid"]) {
    parse_grid(root["grid"], cfg.grid);
  }
  if (root["inpainter"]) {
    cfg.plan.inpainter = get<std::string>(root["inpainter"], "inpainter");
    if (cfg.plan.inpainter != "tiling" && cfg.plan.inpainter != "ground_extrapolation") {
      fail(root["inpainter"], "inpainter", "expected tiling or ground_extrapolation");
    }
  }
  if (root["seed"]) {
    cfg.plan.seed = get<std::uint64_t>(root["seed"], "seed");
  }
  if (root["margin"]) {
    cfg.options.margin = get_finite(root["margin"], "margin");
    if (cfg.options.margin < 0.0) {
      fail(root["margin"], "margin", "must be non-negative");
    }
  }
  if (root["inpainted_label"]) {
    const int v = get<int>(root["inpainted_label"], "inpainted_label");
    if (v < 0 || v > 255) {
      fail(root["inpainted_label"], "inpainted_label", "class ids are 0..255");
    }
    cfg.options.inpainted_label = static_cast<Label>(v);
  }
  if (root["ground_from_inpainted"]) {
    cfg.options.ground_from_inpainted = get<bool>(root["ground_from_inpainted"], "ground_from_inpainted");
  }
  if (root["ground_ids"]) {
    cfg.options.classes.ground_ids = get_label_set(root["ground_ids"], "ground_ids");
  }
  if (root["vehicle_ids"]) {
    cfg.options.classes.vehicle_ids = get_label_set(root["vehicle_ids"], "vehicle_ids");
  }
  try {
    cfg.options.classes.validate();
  } catch (const Error & e) {
    fail(root, "ground_ids", e.what());
  }
  if (root["category_labels"]) {
    const YAML::Node node = root["category_labels"];
    require_map(node, "category_labels");
    for (const auto & kv : node) {
      const std::string name = kv.first.as<std::string>();
      const int v = get<int>(kv.second, "category_labels." + name);
      if (v < 0 || v > 255) {
        fail(kv.second, "category_labels." + name, "class ids are 0..255");
      }
      cfg.options.category_labels.ids[name] = static_cast<Label>(v);
    }
  }
  if (root["bev_cell"]) {
    cfg.options.bev_cell = get_finite(root["bev_cell"], "bev_cell");
    if (!(cfg.options.bev_cell > 0.0)) {
      fail(root["bev_cell"], "bev_cell", "must be positive");
    }
  }
  if (root["perturb"]) {
    const YAML::Node node = root["perturb"];
    require_map(node, "perturb");
    reject_unknown(node, "perturb", {"max_translation", "max_yaw_deg", "max_attempts"});
    if (node["max_translation"]) {
      cfg.plan.perturb.max_translation = get_finite(node["max_translation"], "perturb.max_translation");
    }
    if (node["max_yaw_deg"]) {
      cfg.plan.perturb.max_yaw = deg_to_rad(get_finite(node["max_yaw_deg"], "perturb.max_yaw_deg"));
    }
    if (node["max_attempts"]) {
      cfg.plan.perturb.max_attempts = get<int>(node["max_attempts"], "perturb.max_attempts");
    }
    if (cfg.plan.perturb.max_translation < 0.0 || cfg.plan.perturb.max_yaw < 0.0 ||
      cfg.plan.perturb.max_attempts < 1)
    {
      fail(node, "perturb", "limits must be non-negative and max_attempts >= 1");
    }
  }
  if (root["ground_extrapolation"]) {
    const YAML::Node node = root["ground_extrapolation"];
    require_map(node, "ground_extrapolation");
    reject_unknown(node, "ground_extrapolation", {"context_radius", "min_ground_points"});
    if (node["context_radius"]) {
      cfg.ground_extrapolation.context_radius =
        get_finite(node["context_radius"], "ground_extrapolation.context_radius");
    }
    if (node["min_ground_points"]) {
      cfg.ground_extrapolation.min_ground_points =
        get_index(node["min_ground_points"], "ground_extrapolation.min_ground_points");
    }
  }
  if (root["removals"]) {
    if (!root["removals"].IsSequence()) {
      fail(root["removals"], "removals", "expected a list");
    }
    for (std::size_t i = 0; i < root["removals"].size(); ++i) {
      cfg.plan.removals.push_back(
        parse_removal(root["removals"][i], "removals[" + std::to_string(i) + "]"));
    }
  }
  if (root["insertions"]) {
    if (!root["insertions"].IsSequence()) {
      fail(root["insertions"], "insertions", "expected a list");
    }
    for (std::size_t i = 0; i < root["insertions"].size(); ++i) {
      cfg.plan.insertions.push_back(
        parse_insertion(root["insertions"][i], "insertions[" + std::to_string(i) + "]"));
    }
  }
  if (!cfg.plan.insertions.empty() && cfg.library.empty()) {
    throw Error(ErrorCode::kConfig, "line 1: field 'library': required when insertions are given", 1);
  }
  return cfg;
}

EditConfig load_edit_config(const std::filesystem::path & path)
{
  return parse_edit_config(read_file_text(path), path.parent_path());
}

}  // namespace scanedit::cli
