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

#ifndef SCANEDIT__CLI__EDIT_CONFIG_HPP_
#define SCANEDIT__CLI__EDIT_CONFIG_HPP_

#include "scanedit/inpainters.hpp"
#include "scanedit/insertion.hpp"
#include "scanedit/scan_io.hpp"
#include "scanedit/spherical_grid.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace scanedit::cli
{

struct EditInput
{
  std::filesystem::path scan;
  std::filesystem::path labels;
  std::filesystem::path boxes;
};

/// Parsed `edit` configuration. Relative paths are resolved against the
/// directory of the config file.
struct EditConfig
{
  int version = 1;
  std::vector<EditInput> inputs;
  std::filesystem::path library;
  std::filesystem::path output;
  GridConfig grid;
  EditPlan plan;
  EditOptions options;
  GroundExtrapolationOptions ground_extrapolation;
};

/// Throws Config errors carrying the offending line (1-based) and field.
EditConfig parse_edit_config(const std::string & yaml_text, const std::filesystem::path & base_dir = {});
EditConfig load_edit_config(const std::filesystem::path & path);

}  // namespace scanedit::cli

#endif  // SCANEDIT__CLI__EDIT_CONFIG_HPP_
