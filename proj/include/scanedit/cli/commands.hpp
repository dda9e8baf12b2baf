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

#ifndef SCANEDIT__CLI__COMMANDS_HPP_
#define SCANEDIT__CLI__COMMANDS_HPP_

#include "scanedit/error.hpp"
#include "scanedit/spherical_grid.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scanedit::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 70;

/// Distinct process exit code per error kind.
int exit_code_for(ErrorCode code);

/// Human-readable exit code table, one `code  name` line per entry.
std::string exit_code_table();

struct EditArgs
{
  std::filesystem::path config;
  int jobs = 1;
};

/// Per input, writes `<id>.edited.bin`, `.labels` (labeled inputs),
/// `.boxes.txt` (kept and inserted boxes), `.inserted.boxes.txt` and
/// `.provenance` (one byte per point: 0 original, 1 inpainted, 2 inserted)
/// into the configured output directory.
int cmd_edit(const EditArgs & args, std::ostream & out, std::ostream & err);

struct BuildLibraryArgs
{
  std::vector<std::filesystem::path> scans;
  /// Only with a single scan; otherwise each scan's `<id>.boxes.txt` is used.
  std::filesystem::path boxes;
  std::filesystem::path output;
  double margin = 0.1;
  std::size_t min_points = 10;
  /// Empty means every category.
  std::vector<std::string> categories;
  bool complete = true;
};

int cmd_build_library(const BuildLibraryArgs & args, std::ostream & out, std::ostream & err);

struct SimulateArgs
{
  std::filesystem::path scene;
  std::filesystem::path output;
  std::string id = "sim";
  GridConfig grid;
  std::optional<std::size_t> pair;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Writes `<id>.bin/.labels/.boxes.txt`; with `pair` also `<id>_without.*`
/// and `<id>_revealed.bin/.labels`.
int cmd_simulate(const SimulateArgs & args, std::ostream & out, std::ostream & err);

struct EvaluateArgs
{
  std::filesystem::path pred;
  std::filesystem::path ref;
  /// Optional grid dump restricting the comparison.
  std::filesystem::path region;
  GridConfig grid;
  double log_base = 2.718281828459045;
  std::optional<double> bandwidth;
};

int cmd_evaluate(const EvaluateArgs & args, std::ostream & out, std::ostream & err);

struct MaskEvalArgs
{
  std::vector<std::filesystem::path> scans;
  GridConfig grid;
  std::vector<std::string> inpainters{"tiling", "ground_extrapolation"};
  /// Box size; averaged over the scans' boxes of `category` when unset.
  std::optional<Vec3> box_size;
  std::string category = "car";
  double distance = 10.0;
  double step_deg = 1.0;
  double log_base = 2.718281828459045;
  std::optional<double> bandwidth;
};

int cmd_mask_eval(const MaskEvalArgs & args, std::ostream & out, std::ostream & err);

}  // namespace scanedit::cli

#endif  // SCANEDIT__CLI__COMMANDS_HPP_
