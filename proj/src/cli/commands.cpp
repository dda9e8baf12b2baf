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
#include "scanedit/eval_mask.hpp"
#include "scanedit/inpainters.hpp"
#include "scanedit/insertion.hpp"
#include "scanedit/metrics.hpp"
#include "scanedit/object_library.hpp"
#include "scanedit/scan_io.hpp"
#include "scanedit/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

namespace scanedit::cli
{

namespace
{

struct ExitEntry
{
  ErrorCode code;
  int exit;
};

constexpr ExitEntry kExitTable[] = {
  {ErrorCode::kConfig, 2},
  {ErrorCode::kIo, 3},
  {ErrorCode::kMalformedScan, 10},
  {ErrorCode::kLabelLengthMismatch, 11},
  {ErrorCode::kMalformedBoxLine, 12},
  {ErrorCode::kMalformedScene, 13},
  {ErrorCode::kMalformedArchive, 14},
  {ErrorCode::kMalformedGridDump, 15},
  {ErrorCode::kOriginPoint, 20},
  {ErrorCode::kInvalidArgument, 21},
  {ErrorCode::kEmptyObject, 30},
  {ErrorCode::kNoDonorSector, 31},
  {ErrorCode::kInsufficientGroundContext, 32},
  {ErrorCode::kNoObjectFreeSector, 33},
  {ErrorCode::kTooFewPoints, 34},
  {ErrorCode::kEmptyCategory, 35},
  {ErrorCode::kUnknownObject, 36},
  {ErrorCode::kNoGroundPoints, 37},
  {ErrorCode::kObjectOutOfGrid, 38},
  {ErrorCode::kUnnormalizedInput, 40},
  {ErrorCode::kEmptySet, 41},
  {ErrorCode::kEmptyCloud, 42},
};

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void save_bundle(
  const std::filesystem::path & dir, const std::string & id, const PointCloud & cloud,
  std::span<const LabeledBox> boxes)
{
  save_scan(dir / (id + ".bin"), cloud);
  if (cloud.has_labels()) {
    write_file_bytes(dir / (id + ".labels"), write_labels_bin(cloud.labels()));
  }
  write_file_text(dir / (id + ".boxes.txt"), write_boxes_text(boxes));
}

void make_dir(const std::filesystem::path & dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot create directory " + dir.string() + ": " + ec.message());
  }
}

std::string grid_params(const GridConfig & g)
{
  return "grid=" + std::to_string(g.n_r) + "x" + std::to_string(g.n_theta) + "x" +
         std::to_string(g.n_phi);
}

struct MeanStd
{
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double> & v)
{
  MeanStd m;
  if (v.empty()) {
    return m;
  }
  for (const double x : v) {
    m.mean += x;
  }
  m.mean /= static_cast<double>(v.size());
  for (const double x : v) {
    m.std += (x - m.mean) * (x - m.mean);
  }
  m.std = std::sqrt(m.std / static_cast<double>(v.size()));
  return m;
}

}  // namespace

int exit_code_for(ErrorCode code)
{
  for (const ExitEntry & e : kExitTable) {
    if (e.code == code) {
      return e.exit;
    }
  }
  return kExitInternal;
}

std::string exit_code_table()
{
  std::string out = "  0  success\n  1  usage error\n";
  for (const ExitEntry & e : kExitTable) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%3d", e.exit);
    out += std::string(buf) + "  " + std::string(error_code_name(e.code)) + "\n";
  }
  out += " 70  internal error\n";
  return out;
}

int cmd_edit(const EditArgs & args, std::ostream & out, std::ostream & err)
{
  const EditConfig cfg = load_edit_config(args.config);
  if (args.jobs < 1) {
    throw Error(ErrorCode::kConfig, "--jobs must be at least 1");
  }
  const ObjectLibrary library = cfg.library.empty() ? ObjectLibrary{} : load_library(cfg.library);
  std::unique_ptr<Inpainter> inpainter;
  if (cfg.plan.inpainter == "ground_extrapolation") {
    inpainter = std::make_unique<GroundExtrapolationInpainter>(cfg.ground_extrapolation);
  } else {
    inpainter = make_inpainter(cfg.plan.inpainter);
  }
  make_dir(cfg.output);

  const auto n = static_cast<std::ptrdiff_t>(cfg.inputs.size());
  std::vector<std::string> reports(cfg.inputs.size());
  std::vector<std::string> failures(cfg.inputs.size());
  std::vector<int> codes(cfg.inputs.size(), kExitOk);

#pragma omp parallel for schedule(dynamic) num_threads(args.jobs) if (args.jobs > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const EditInput & input = cfg.inputs[i];
    std::ostringstream report;
    std::string step = "load";
    try {
      auto start = std::chrono::steady_clock::now();
      const ScanBundle bundle = load_bundle({input.scan, input.labels, input.boxes});
      const double t_load = seconds_since(start);

      step = "edit";
      start = std::chrono::steady_clock::now();
      const EditResult result = edit_scene(bundle, cfg.plan, library, *inpainter, cfg.grid, cfg.options);
      const double t_edit = seconds_since(start);

      step = "write";
      start = std::chrono::steady_clock::now();
      const std::string stem = bundle.scan_id + ".edited";
      save_bundle(cfg.output, stem, result.cloud, result.scene_boxes());
      write_file_text(
        cfg.output / (stem + ".inserted.boxes.txt"), write_boxes_text(result.inserted_boxes));
      std::vector<std::byte> prov(result.provenance.size());
      for (std::size_t p = 0; p < prov.size(); ++p) {
        prov[p] = static_cast<std::byte>(result.provenance[p]);
      }
      write_file_bytes(cfg.output / (stem + ".provenance"), prov);
      const double t_write = seconds_since(start);

      report << bundle.scan_id << ": points " << bundle.cloud.size() << " -> " << result.cloud.size()
             << " (removed " << result.removed_points << ", inpainted " << result.inpainted_points
             << ", inserted " << result.inserted_points << ")\n";
      report << "  load " << fmt(t_load) << " s\n";
      for (const StepTiming & t : result.timings) {
        report << "  " << t.step << " " << fmt(t.seconds) << " s\n";
      }
      report << "  edit total " << fmt(t_edit) << " s\n";
      report << "  write " << fmt(t_write) << " s\n";
    } catch (const EditError & e) {
      codes[i] = exit_code_for(e.code());
      failures[i] = input.scan.string() + ": step " + e.step() + " failed [" +
        std::string(error_code_name(e.code())) + "]: " + e.what();
    } catch (const Error & e) {
      codes[i] = exit_code_for(e.code());
      failures[i] = input.scan.string() + ": step " + step + " failed [" +
        std::string(error_code_name(e.code())) + "]: " + e.what();
    } catch (const std::exception & e) {
      codes[i] = kExitInternal;
      failures[i] = input.scan.string() + ": step " + step + " failed: " + e.what();
    }
    reports[i] = report.str();
  }

  int code = kExitOk;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << reports[i];
    if (codes[i] != kExitOk) {
      err << "error: " << failures[i] << "\n";
      if (code == kExitOk) {
        code = codes[i];
      }
    }
  }
  return code;
}

int cmd_build_library(const BuildLibraryArgs & args, std::ostream & out, std::ostream & err)
{
  if (!args.boxes.empty() && args.scans.size() != 1) {
    throw Error(ErrorCode::kConfig, "--boxes needs exactly one scan");
  }
  const CategoryLabels category_labels;
  ObjectLibrary library;
  std::map<std::string, std::size_t> counts;
  std::size_t skipped = 0;
  for (const auto & scan_path : args.scans) {
    BundlePaths paths = BundlePaths::siblings_of(scan_path);
    if (!args.boxes.empty()) {
      paths.boxes = args.boxes;
      if (!std::filesystem::exists(paths.boxes)) {
        throw Error(ErrorCode::kIo, "cannot open " + paths.boxes.string());
      }
    }
    const ScanBundle bundle = load_bundle(paths);
    for (std::size_t b = 0; b < bundle.boxes.size(); ++b) {
      const LabeledBox & box = bundle.boxes[b];
      if (!args.categories.empty() &&
        std::find(args.categories.begin(), args.categories.end(), box.category) ==
        args.categories.end())
      {
        continue;
      }
      ExtractOptions opts;
      opts.margin = args.margin;
      opts.min_points = args.min_points;
      // On labeled scans keep only the points carrying this category's id.
      opts.classes.ground_ids.clear();
      opts.classes.vehicle_ids = {category_labels.of(box.category)};
      const std::string id = bundle.scan_id + "_" + std::to_string(b);
      try {
        library.add(
          build_library_object(
            bundle.cloud, box.box, box.category, id, bundle.scan_id, opts,
            args.complete ? CompletionFn(mirror_complete) : CompletionFn()));
        ++counts[box.category];
      } catch (const Error & e) {
        if (e.code() == ErrorCode::kIo) {
          throw;
        }
        ++skipped;
        err << "skip " << id << " [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
      }
    }
  }
  save_library(library, args.output);
  out << "library " << args.output.string() << ": " << library.size() << " objects, " << skipped
      << " skipped\n";
  for (const auto & [category, count] : counts) {
    out << "  " << category << " " << count << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const SimulateArgs & args, std::ostream & out, std::ostream &)
{
  const AnalyticScene scene = read_scene_text(read_file_text(args.scene));
  RaycastOptions options;
  options.noise_sigma = args.noise_sigma;
  options.seed = args.seed;
  make_dir(args.output);

  const RaycastScan scan = raycast_scan(scene, args.grid, options);
  save_bundle(args.output, args.id, scan.cloud, scene.objects);
  out << args.id << ": " << scan.cloud.size() << " points, " << scene.objects.size()
      << " objects\n";

  if (args.pair) {
    const ScanPair pair = paired_scans(scene, *args.pair, args.grid, options);
    std::vector<LabeledBox> others = scene.objects;
    others.erase(others.begin() + static_cast<std::ptrdiff_t>(*args.pair));
    save_bundle(args.output, args.id + "_without", pair.without.cloud, others);
    save_scan(args.output / (args.id + "_revealed.bin"), pair.revealed);
    write_file_bytes(
      args.output / (args.id + "_revealed.labels"), write_labels_bin(pair.revealed.labels()));
    out << args.id << "_without: " << pair.without.cloud.size() << " points; revealed "
        << pair.revealed.size() << " points behind object " << *args.pair << "\n";
  }
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs & args, std::ostream & out, std::ostream &)
{
  const PointCloud pred = load_scan(args.pred);
  const PointCloud ref = load_scan(args.ref);
  std::optional<VoxelMask> region;
  if (!args.region.empty()) {
    region = read_grid_dump(read_file_text(args.region));
    if (!(region->config() == args.grid)) {
      throw Error(ErrorCode::kInvalidArgument, "region mask grid differs from the grid flags");
    }
  }
  const OccupancyGrid pred_grid = voxelize(pred, args.grid);
  const OccupancyGrid ref_grid = voxelize(ref, args.grid);

  auto in_region = [&](const PointCloud & cloud, const OccupancyGrid & grid) {
      if (!region) {
        return cloud;
      }
      std::vector<std::uint8_t> keep(cloud.size(), 0);
      for (std::size_t i = 0; i < cloud.size(); ++i) {
        keep[i] = grid.point_voxels[i] != kNoVoxel && region->test_id(grid.point_voxels[i]);
      }
      return cloud.filter(keep);
    };

  const VoxelMask * mask = region ? &*region : nullptr;
  const BevHistogram hp = bev_histogram(pred_grid, mask);
  const BevHistogram hr = bev_histogram(ref_grid, mask);
  const std::size_t region_size = region ? region_columns(*region) :
    static_cast<std::size_t>(args.grid.n_theta) * static_cast<std::size_t>(args.grid.n_r);

  const double j = jsd(hp, hr, args.log_base);
  const MmdResult m = mmd(std::span(&hp, 1), std::span(&hr, 1), args.bandwidth);
  const double c = chamfer(in_region(pred, pred_grid), in_region(ref, ref_grid));

  const std::string grid = grid_params(args.grid);
  const std::vector<MetricRow> rows{
    {"jsd", j, "log_base=" + fmt(args.log_base) + ";" + grid, region_size},
    {"mmd", m.value, "kernel=gaussian;bandwidth=" + fmt(m.bandwidth) + ";" + grid, region_size},
    {"chamfer", c, "unit=m", region_size},
  };
  out << format_metric_report(rows);
  return kExitOk;
}

int cmd_mask_eval(const MaskEvalArgs & args, std::ostream & out, std::ostream & err)
{
  std::vector<ScanBundle> bundles;
  for (const auto & path : args.scans) {
    bundles.push_back(load_bundle(BundlePaths::siblings_of(path)));
  }
  Vec3 size = Vec3::Zero();
  if (args.box_size) {
    size = *args.box_size;
  } else {
    std::size_t n = 0;
    for (const ScanBundle & b : bundles) {
      for (const LabeledBox & box : b.boxes) {
        if (box.category == args.category) {
          size += box.box.size;
          ++n;
        }
      }
    }
    if (n == 0) {
      throw Error(
        ErrorCode::kConfig, "no '" + args.category + "' boxes to average; pass --box-size");
    }
    size /= static_cast<double>(n);
  }
  std::vector<std::unique_ptr<Inpainter>> inpainters;
  for (const std::string & name : args.inpainters) {
    inpainters.push_back(make_inpainter(name));
  }

  struct Acc
  {
    std::vector<double> jsd;
    std::vector<double> chamfer;
    std::vector<BevHistogram> generated;
    std::vector<BevHistogram> real;
    std::size_t failed = 0;
    std::size_t outside_mask = 0;
    std::size_t region = 0;
  };
  std::vector<Acc> acc(inpainters.size());
  std::size_t evaluated = 0;

  SynthMaskOptions mask_opts;
  mask_opts.distance = args.distance;
  mask_opts.step_deg = args.step_deg;
  for (const ScanBundle & bundle : bundles) {
    std::vector<BoundingBox> boxes;
    for (const LabeledBox & b : bundle.boxes) {
      boxes.push_back(b.box);
    }
    std::optional<SynthMask> synth;
    try {
      synth = synth_eval_mask(bundle.cloud, boxes, size, args.grid, mask_opts);
    } catch (const Error & e) {
      err << "skip " << bundle.scan_id << " [" << error_code_name(e.code()) << "]: " << e.what()
          << "\n";
      continue;
    }
    if (synth->held_out.empty()) {
      err << "skip " << bundle.scan_id << ": mask holds no points\n";
      continue;
    }
    ++evaluated;
    const OccupancyGrid bg_grid = voxelize(synth->background, args.grid);
    const OccupancyGrid real_grid = voxelize(synth->held_out, args.grid);
    const BevHistogram real_hist = bev_histogram(real_grid, &synth->mask);
    const std::size_t region = region_columns(synth->mask);
    SemanticClassSets classes;
    const InpaintRequest request{
      synth->background, bg_grid, synth->mask, args.grid, boxes, classes, 0.1};

    for (std::size_t k = 0; k < inpainters.size(); ++k) {
      std::vector<Point> fill;
      try {
        fill = inpainters[k]->fill(request);
      } catch (const Error & e) {
        ++acc[k].failed;
        err << bundle.scan_id << " " << inpainters[k]->name() << " ["
            << error_code_name(e.code()) << "]: " << e.what() << "\n";
        continue;
      }
      const PointCloud generated{std::vector<Point>(fill)};
      const OccupancyGrid gen_grid = voxelize(generated, args.grid);
      std::vector<std::uint8_t> inside(generated.size(), 0);
      for (std::size_t i = 0; i < generated.size(); ++i) {
        inside[i] = gen_grid.point_voxels[i] != kNoVoxel && synth->mask.test_id(gen_grid.point_voxels[i]);
        acc[k].outside_mask += !inside[i];
      }
      const BevHistogram gen_hist = bev_histogram(gen_grid, &synth->mask);
      if (!gen_hist.normalized) {
        ++acc[k].failed;
        err << bundle.scan_id << " " << inpainters[k]->name() << ": generated no points\n";
        continue;
      }
      acc[k].jsd.push_back(jsd(gen_hist, real_hist, args.log_base));
      acc[k].chamfer.push_back(chamfer(generated, synth->held_out));
      acc[k].generated.push_back(gen_hist);
      acc[k].real.push_back(real_hist);
      acc[k].region += region;
    }
  }

  std::vector<MetricRow> rows;
  const std::string grid = grid_params(args.grid);
  for (std::size_t k = 0; k < inpainters.size(); ++k) {
    const std::string name(inpainters[k]->name());
    const Acc & a = acc[k];
    const std::string n = "n=" + std::to_string(a.jsd.size()) + ";failed=" + std::to_string(a.failed);
    if (a.jsd.empty()) {
      rows.push_back({name + ".jsd_mean", std::nan(""), n, 0});
      continue;
    }
    const MeanStd j = mean_std(a.jsd);
    const MeanStd c = mean_std(a.chamfer);
    const MmdResult m = mmd(a.generated, a.real, args.bandwidth);
    rows.push_back({name + ".jsd_mean", j.mean, "log_base=" + fmt(args.log_base) + ";" + n + ";" + grid, a.region});
    rows.push_back({name + ".jsd_std", j.std, "log_base=" + fmt(args.log_base) + ";" + n, a.region});
    rows.push_back({name + ".mmd", m.value, "kernel=gaussian;bandwidth=" + fmt(m.bandwidth) + ";" + n, a.region});
    rows.push_back({name + ".chamfer_mean", c.mean, "unit=m;" + n, a.region});
    rows.push_back({name + ".chamfer_std", c.std, "unit=m;" + n, a.region});
    rows.push_back({name + ".outside_mask", static_cast<double>(a.outside_mask), n, a.region});
  }
  out << "# scans " << bundles.size() << ", evaluated " << evaluated << ", box " << fmt(size.x())
      << " x " << fmt(size.y()) << " x " << fmt(size.z()) << " at " << fmt(args.distance) << " m\n";
  out << format_metric_report(rows);
  return kExitOk;
}

}  // namespace scanedit::cli
