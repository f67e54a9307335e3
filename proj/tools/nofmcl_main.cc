/*
 * Copyright 2026 The nofmcl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: simulate, train, render, build-nog, localize,
// eval, compare-obs, import-carmen, config-reference, plot, export-world.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nofmcl/core/error.h"
#include "nofmcl/eval/metrics.h"
#include "nofmcl/field/checkpoint.h"
#include "nofmcl/gridmap/occ_grid.h"
#include "nofmcl/io/carmen.h"
#include "nofmcl/io/container.h"
#include "nofmcl/io/plot.h"
#include "nofmcl/io/run_config.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/mcl/particle_filter.h"
#include "nofmcl/nog/nog.h"
#include "nofmcl/render/volume_render.h"
#include "nofmcl/sim/simulator.h"
#include "nofmcl/train/trainer.h"

namespace nofmcl {
namespace {

std::vector<double> ParseNumbers(const std::string& text, std::size_t count,
                                 const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  if (count != 0 && out.size() != count) {
    throw UsageError(what + " needs " + std::to_string(count) +
                     " comma-separated numbers");
  }
  return out;
}

Box2 ParseBox(const std::string& text) {
  const auto v = ParseNumbers(text, 4, "--bounds");
  Box2 box{Vec2(v[0], v[1]), Vec2(v[2], v[3])};
  if (box.degenerate()) throw UsageError("--bounds is degenerate");
  return box;
}

sim::WorldMap LoadWorld(const std::string& name_or_path) {
  for (const auto& w : sim::builtin_worlds()) {
    if (w.name == name_or_path) return w;
  }
  return sim::ReadWorld(name_or_path);
}

struct Common {
  std::string config_path;
  std::optional<uint64_t> seed;

  io::RunConfig Load() const {
    io::RunConfig c =
        config_path.empty() ? io::RunConfig::Defaults() : io::ReadRunConfig(config_path);
    if (seed) {
      c.seed = *seed;
      c.train.rng_seed = *seed;
      c.filter.rng_seed = *seed;
    }
    return c;
  }
};

void AddCommon(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON run configuration")
      ;
  cmd->add_option("--seed", common.seed, "Overrides every seed in the configuration");
}

render::RaySampling SamplingFor(const LidarParams& params, const io::RunConfig& c) {
  return render::RaySampling::ForLidar(params, c.train.samples_per_ray);
}

// Keeps the map representation alive behind a scan predictor.
struct MapSource {
  std::optional<field::FieldModel> model;
  std::optional<nog::Nog> nog;
  std::optional<gridmap::OccGrid> grid;
  std::optional<sim::WorldMap> world;
  std::unique_ptr<render::OccupancySource> source;
  std::unique_ptr<render::ScanPredictor> predictor;
  std::string name;

  std::optional<Box2> extent() const {
    if (nog) return nog->extent();
    if (world) return world->bounds;
    if (grid) {
      return Box2{grid->origin,
                  grid->origin + grid->resolution * Vec2(grid->width, grid->height)};
    }
    return std::nullopt;
  }
};

std::unique_ptr<MapSource> OpenMap(const std::string& model_path,
                                   const std::string& nog_path,
                                   const std::string& grid_path,
                                   const std::string& world_name,
                                   const render::RaySampling& sampling) {
  auto m = std::make_unique<MapSource>();
  if (!nog_path.empty()) {
    m->nog = nog::LoadNog(nog_path);
    m->source = std::make_unique<nog::NogSource>(*m->nog);
    m->name = "nog";
  } else if (!model_path.empty()) {
    m->model = field::LoadModel(model_path);
    m->source = std::make_unique<render::FieldSource>(*m->model);
    m->name = "field";
  } else if (!grid_path.empty()) {
    m->grid = gridmap::LoadGrid(grid_path);
    m->predictor = std::make_unique<gridmap::GridScanPredictor>(*m->grid);
    m->name = "grid";
    return m;
  } else if (!world_name.empty()) {
    m->world = LoadWorld(world_name);
    m->predictor = std::make_unique<sim::ExactScanPredictor>(*m->world);
    m->name = "oracle";
    return m;
  } else {
    throw UsageError("one of --model, --nog, --grid or --world is required");
  }
  m->predictor = std::make_unique<render::VolumeScanPredictor>(*m->source, sampling);
  return m;
}

LidarFrame PredictFrame(const render::ScanPredictor& predictor, const Pose2& pose,
                        const LidarParams& params, double timestamp) {
  LidarFrame frame;
  frame.timestamp = timestamp;
  frame.params = params;
  frame.ranges.resize(params.num_beams);
  std::vector<int> beams(params.num_beams);
  for (int i = 0; i < params.num_beams; ++i) beams[i] = i;
  predictor.Predict(pose, params, beams, frame.ranges);
  return frame;
}

eval::ScanQualityReport ScanQualityOver(const render::ScanPredictor& predictor,
                                        const io::ScanLog& log, double threshold,
                                        int* skipped) {
  eval::ScanQualityAccumulator acc;
  for (std::size_t i = 0; i < log.frames.size(); ++i) {
    const auto& f = log.frames[i];
    if (!f.pose) throw InputError("scan eval: frame " + std::to_string(i) + " has no pose");
    const auto predicted = PredictFrame(predictor, *f.pose, log.params, f.timestamp);
    try {
      acc.Add(eval::scan_quality(predicted, log.lidar_frame(i), *f.pose, threshold));
    } catch (const InputError&) {
      if (skipped != nullptr) ++*skipped;
    }
  }
  if (acc.scans == 0) throw InputError("scan eval: no frame has mutually valid beams");
  return acc.Mean();
}

void Emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::WriteFileAtomic(out_path, text);
  }
}

std::vector<mcl::StepRecord> ReadTrajectory(const std::string& path) {
  return mcl::ParseLocalization(io::ReadFileText(path));
}

int Run(int argc, char** argv) {
  CLI::App app{"Neural occupancy field localization toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // simulate
  Common sim_c;
  std::string sim_world, sim_traj, sim_out;
  int sim_poses = 0;
  double sim_clearance = 0.3;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a simulated scan log");
  AddCommon(sim_cmd, sim_c);
  sim_cmd->add_option("--world", sim_world, "Built-in world name or world file")->required();
  sim_cmd->add_option("--trajectory", sim_traj, "Trajectory JSON (default: built-in loop)");
  sim_cmd->add_option("--poses", sim_poses, "Scatter this many independent poses instead");
  sim_cmd->add_option("--clearance", sim_clearance, "Wall clearance of scattered poses (m)");
  sim_cmd->add_option("--out", sim_out, "Output scan log")->required();

  // train
  Common train_c;
  std::string train_log, train_out, train_report;
  auto* train_cmd = app.add_subcommand("train", "Fit an occupancy field to a posed log");
  AddCommon(train_cmd, train_c);
  train_cmd->add_option("--log", train_log, "Posed scan log")->required();
  train_cmd->add_option("--out", train_out, "Output model")->required();
  train_cmd->add_option("--report", train_report, "Per-epoch report (JSON lines)");

  // render
  Common render_c;
  std::string render_model, render_nog, render_pose, render_out;
  auto* render_cmd = app.add_subcommand("render", "Render the expected scan at a pose");
  AddCommon(render_cmd, render_c);
  render_cmd->add_option("--model", render_model, "Field model");
  render_cmd->add_option("--nog", render_nog, "Render through a NOG instead");
  render_cmd->add_option("--pose", render_pose, "x,y,theta")->required();
  render_cmd->add_option("--out", render_out, "Output scan log (one frame)")->required();

  // build-nog
  Common nog_c;
  std::string nog_model, nog_bounds, nog_out, nog_pgm;
  std::optional<double> nog_res;
  auto* nog_cmd = app.add_subcommand("build-nog", "Cache a field on a dense grid");
  AddCommon(nog_cmd, nog_c);
  nog_cmd->add_option("--model", nog_model, "Field model")->required();
  nog_cmd->add_option("--bounds", nog_bounds, "xmin,ymin,xmax,ymax")->required();
  nog_cmd->add_option("--resolution", nog_res, "Cell size (m)");
  nog_cmd->add_option("--out", nog_out, "Output NOG")->required();
  nog_cmd->add_option("--pgm", nog_pgm, "Also write a PGM image");

  // build-grid
  Common grid_c;
  std::string grid_log, grid_out, grid_pgm, grid_bounds;
  auto* grid_cmd = app.add_subcommand("build-grid", "Build the baseline occupancy grid");
  AddCommon(grid_cmd, grid_c);
  grid_cmd->add_option("--log", grid_log, "Posed scan log")->required();
  grid_cmd->add_option("--bounds", grid_bounds, "xmin,ymin,xmax,ymax (default: fit the log)");
  grid_cmd->add_option("--out", grid_out, "Output grid")->required();
  grid_cmd->add_option("--pgm", grid_pgm, "Also write a PGM image");

  // localize
  Common loc_c;
  std::string loc_log, loc_model, loc_nog, loc_grid, loc_world, loc_out;
  auto* loc_cmd = app.add_subcommand("localize", "Run global localization over a log");
  AddCommon(loc_cmd, loc_c);
  loc_cmd->add_option("--log", loc_log, "Scan log with odometry")->required();
  loc_cmd->add_option("--model", loc_model, "Field model");
  loc_cmd->add_option("--nog", loc_nog, "NOG (preferred over --model)");
  loc_cmd->add_option("--grid", loc_grid, "Baseline grid with Bresenham casting");
  loc_cmd->add_option("--world", loc_world, "Exact oracle world");
  loc_cmd->add_option("--out", loc_out, "Output trajectory (JSON lines)")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Metrics");
  eval_cmd->require_subcommand(1);
  Common ape_c;
  std::string ape_traj, ape_truth, ape_out;
  auto* ape_cmd = eval_cmd->add_subcommand("ape", "Absolute pose error");
  AddCommon(ape_cmd, ape_c);
  ape_cmd->add_option("--traj", ape_traj, "Localization output")->required();
  ape_cmd->add_option("--truth", ape_truth, "Posed scan log")->required();
  ape_cmd->add_option("--out", ape_out, "Report file (default: stdout)");

  Common scan_c;
  std::string scan_log, scan_model, scan_nog, scan_grid, scan_world, scan_out;
  auto* scan_cmd = eval_cmd->add_subcommand("scan", "Rendered scan quality");
  AddCommon(scan_cmd, scan_c);
  scan_cmd->add_option("--log", scan_log, "Posed scan log")->required();
  scan_cmd->add_option("--model", scan_model, "Field model");
  scan_cmd->add_option("--nog", scan_nog, "NOG");
  scan_cmd->add_option("--grid", scan_grid, "Baseline grid");
  scan_cmd->add_option("--world", scan_world, "Exact oracle world");
  scan_cmd->add_option("--out", scan_out, "Report file (default: stdout)");

  Common conv_c;
  std::string conv_traj, conv_truth, conv_out, conv_plot;
  auto* conv_cmd = eval_cmd->add_subcommand("converge", "Per-frame location error");
  AddCommon(conv_cmd, conv_c);
  conv_cmd->add_option("--traj", conv_traj, "Localization output")->required();
  conv_cmd->add_option("--truth", conv_truth, "Posed scan log")->required();
  conv_cmd->add_option("--out", conv_out, "CSV series (default: stdout)");
  conv_cmd->add_option("--plot", conv_plot, "Also write a PGM chart");

  Common bench_c;
  std::string bench_log, bench_model, bench_nog, bench_particles = "1000,5000", bench_out;
  int bench_steps = 3;
  auto* bench_cmd = eval_cmd->add_subcommand("bench", "Filter throughput per source");
  AddCommon(bench_cmd, bench_c);
  bench_cmd->add_option("--log", bench_log, "Scan log")->required();
  bench_cmd->add_option("--model", bench_model, "Field model")->required();
  bench_cmd->add_option("--nog", bench_nog, "NOG")->required();
  bench_cmd->add_option("--particles", bench_particles, "Comma-separated particle counts");
  bench_cmd->add_option("--steps", bench_steps, "Filter steps per measurement");
  bench_cmd->add_option("--out", bench_out, "Report file (default: stdout)");

  // compare-obs
  Common cmp_c;
  std::string cmp_log, cmp_model, cmp_nog, cmp_grid_from, cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare-obs", "Field vs. Bresenham scan quality");
  AddCommon(cmp_cmd, cmp_c);
  cmp_cmd->add_option("--log", cmp_log, "Posed evaluation log")->required();
  cmp_cmd->add_option("--model", cmp_model, "Field model")->required();
  cmp_cmd->add_option("--nog", cmp_nog, "Also score a NOG");
  cmp_cmd->add_option("--grid-from", cmp_grid_from, "Posed log the grid is built from")
      ->required();
  cmp_cmd->add_option("--out", cmp_out, "Report file (default: stdout)");

  // import-carmen
  Common carmen_c;
  std::string carmen_in, carmen_out;
  bool carmen_config_lidar = false;
  auto* carmen_cmd = app.add_subcommand("import-carmen", "Convert a CARMEN log");
  AddCommon(carmen_cmd, carmen_c);
  carmen_cmd->add_option("--in", carmen_in, "CARMEN log")->required();
  carmen_cmd->add_option("--out", carmen_out, "Output scan log")->required();
  carmen_cmd->add_flag("--lidar-from-config", carmen_config_lidar,
                       "Use the configured lidar geometry instead of the inferred one");

  // config-reference
  std::string ref_out;
  auto* ref_cmd = app.add_subcommand("config-reference", "Print every configuration key");
  ref_cmd->add_option("--out", ref_out, "Markdown file (default: stdout)");

  // plot
  std::string plot_report, plot_series, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Draw a training report or a CSV series");
  plot_cmd->add_option("--report", plot_report, "Training report");
  plot_cmd->add_option("--series", plot_series, "Two-column CSV with a header");
  plot_cmd->add_option("--out", plot_out, "Output PGM")->required();

  // export-world
  std::string world_name, world_out;
  auto* world_cmd = app.add_subcommand("export-world", "Write a built-in world file");
  world_cmd->add_option("--world", world_name, "Built-in world name")->required();
  world_cmd->add_option("--out", world_out, "Output world file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (*sim_cmd) {
    const auto c = sim_c.Load();
    const auto world = LoadWorld(sim_world);
    Rng rng(c.seed);
    io::ScanLog log;
    if (sim_poses > 0) {
      Box2 region{Vec2::Constant(INFINITY), Vec2::Constant(-INFINITY)};
      for (const auto& s : world.segments) {
        region.min = region.min.cwiseMin(s.a).cwiseMin(s.b);
        region.max = region.max.cwiseMax(s.a).cwiseMax(s.b);
      }
      const auto poses = sim::sample_free_poses(world, region, sim_poses, sim_clearance, rng);
      log = sim::scans_at_poses(world, poses, c.lidar, c.sim.range_noise_std, rng);
    } else {
      sim::TrajectorySpec spec;
      if (!sim_traj.empty()) {
        try {
          spec = sim::TrajectorySpecFromJson(nlohmann::json::parse(io::ReadFileText(sim_traj)));
        } catch (const nlohmann::json::exception& e) {
          throw InputError(std::string("trajectory: ") + e.what());
        }
      } else {
        spec = sim::builtin_trajectory(world.name);
        spec.speed = c.sim.speed;
        spec.turn_rate = c.sim.turn_rate;
        spec.scan_rate = c.sim.scan_rate;
        spec.odom_noise = c.sim.odom_noise;
        spec.range_noise_std = c.sim.range_noise_std;
        spec.max_frames = c.sim.max_frames;
      }
      log = sim::generate_log(world, spec, c.lidar, rng).log;
    }
    io::WriteScanLog(log, sim_out);
    std::cout << "frames " << log.frames.size() << "\n";
    return 0;
  }

  if (*train_cmd) {
    const auto c = train_c.Load();
    const auto log = io::ReadScanLog(train_log);
    auto result = train::fit(log, c.train, [](const train::EpochRecord& r) {
      std::fprintf(stderr, "epoch %d geo %.5f reg %.5f lr %.3g %.1fs\n", r.epoch,
                   r.geometric, r.regularizer, r.learning_rate, r.seconds);
    });
    field::SaveModel(result.model, train_out);
    if (!train_report.empty()) train::WriteTrainReport(result.report, train_report);
    std::cout << "train_frames " << result.report.train_frames << "\n"
              << "held_out_frames " << result.report.held_out_frames << "\n";
    if (result.report.validation_mae) {
      std::cout << "validation_mae " << *result.report.validation_mae << "\n";
    }
    return 0;
  }

  if (*render_cmd) {
    const auto c = render_c.Load();
    const auto v = ParseNumbers(render_pose, 3, "--pose");
    const Pose2 pose(v[0], v[1], v[2]);
    auto map = OpenMap(render_model, render_nog, "", "", SamplingFor(c.lidar, c));
    if (map->nog && !map->nog->extent().contains(pose.translation())) {
      std::fprintf(stderr, "warning: pose lies outside the NOG bounds\n");
    }
    io::ScanLog out;
    out.params = c.lidar;
    io::LogFrame f;
    f.pose = pose;
    f.ranges = PredictFrame(*map->predictor, pose, c.lidar, 0.0).ranges;
    out.frames.push_back(f);
    io::WriteScanLog(out, render_out);
    return 0;
  }

  if (*nog_cmd) {
    const auto c = nog_c.Load();
    const auto model = field::LoadModel(nog_model);
    const auto nog = nog::build_nog(model, ParseBox(nog_bounds), nog_res.value_or(c.nog_resolution));
    nog::SaveNog(nog, nog_out);
    if (!nog_pgm.empty()) io::WritePgm(nog::NogToImage(nog), nog_pgm);
    std::cout << "cells " << nog.width << " x " << nog.height << "\n";
    return 0;
  }

  if (*grid_cmd) {
    const auto c = grid_c.Load();
    const auto log = io::ReadScanLog(grid_log);
    std::optional<Box2> bounds;
    if (!grid_bounds.empty()) bounds = ParseBox(grid_bounds);
    const auto grid = gridmap::build_grid(log, c.grid_resolution, c.grid, bounds);
    gridmap::SaveGrid(grid, grid_out);
    if (!grid_pgm.empty()) io::WritePgm(gridmap::GridToImage(grid), grid_pgm);
    std::cout << "cells " << grid.width << " x " << grid.height << "\n";
    return 0;
  }

  if (*loc_cmd) {
    auto c = loc_c.Load();
    const auto log = io::ReadScanLog(loc_log);
    auto map = OpenMap(loc_model, loc_nog, loc_grid, loc_world, SamplingFor(log.params, c));
    const auto bounds = c.map_bounds ? c.map_bounds : map->extent();
    if (!bounds) throw UsageError("set filter.map_bounds when localizing on a bare field");
    c.filter.map_bounds = *bounds;
    const auto records = mcl::localize(log, c.filter, *map->predictor,
                                       [](const mcl::StepRecord& r) {
                                         std::fprintf(stderr,
                                                      "t %.2f spread %.3f particles %d %.1f ms%s\n",
                                                      r.timestamp, r.estimate.spread,
                                                      r.num_particles, 1e3 * r.seconds,
                                                      r.converged ? " converged" : "");
                                       });
    mcl::WriteLocalization(records, loc_out);
    return 0;
  }

  if (*ape_cmd) {
    const auto c = ape_c.Load();
    const auto records = ReadTrajectory(ape_traj);
    const auto truth = eval::TruthOf(io::ReadScanLog(ape_truth));
    std::optional<double> converged_at;
    for (const auto& r : records) {
      if (r.converged) {
        converged_at = r.timestamp;
        break;
      }
    }
    const auto report = eval::ape_report(eval::EstimatesOf(records), truth, c.ape, converged_at);
    Emit(ape_out, eval::FormatReport(report));
    if (!report.converged) {
      throw Error(ErrorCode::kLocalizationFailed,
                  "location or yaw RMSE above the failure gate");
    }
    return 0;
  }

  if (*scan_cmd) {
    const auto c = scan_c.Load();
    const auto log = io::ReadScanLog(scan_log);
    auto map = OpenMap(scan_model, scan_nog, scan_grid, scan_world, SamplingFor(log.params, c));
    int skipped = 0;
    const auto report = ScanQualityOver(*map->predictor, log, c.scan_threshold, &skipped);
    Emit(scan_out, "source " + map->name + "\n" + eval::FormatReport(report) +
                       "skipped_frames " + std::to_string(skipped) + "\n");
    return 0;
  }

  if (*conv_cmd) {
    const auto c = conv_c.Load();
    const auto records = ReadTrajectory(conv_traj);
    const auto truth = eval::TruthOf(io::ReadScanLog(conv_truth));
    const auto series = eval::convergence_curve(eval::EstimatesOf(records), truth, c.ape.max_gap);
    Emit(conv_out, eval::SeriesCsv(series, "t", "location_error_m"));
    if (!conv_plot.empty()) io::WritePgm(io::LinePlot({series}), conv_plot);
    return 0;
  }

  if (*bench_cmd) {
    auto c = bench_c.Load();
    const auto log = io::ReadScanLog(bench_log);
    const auto sampling = SamplingFor(log.params, c);
    auto field_map = OpenMap(bench_model, "", "", "", sampling);
    auto nog_map = OpenMap("", bench_nog, "", "", sampling);
    c.filter.map_bounds = c.map_bounds.value_or(*nog_map->extent());
    std::vector<int> counts;
    for (double n : ParseNumbers(bench_particles, 0, "--particles")) {
      if (n < 1) throw UsageError("--particles must be positive");
      counts.push_back(static_cast<int>(n));
    }
    const auto rows = eval::throughput_bench(
        log, {{"field", field_map->predictor.get()}, {"nog", nog_map->predictor.get()}},
        counts, c.filter, bench_steps);
    Emit(bench_out, eval::FormatBench(rows));
    return 0;
  }

  if (*cmp_cmd) {
    const auto c = cmp_c.Load();
    const auto log = io::ReadScanLog(cmp_log);
    const auto sampling = SamplingFor(log.params, c);
    const auto grid = gridmap::build_grid(io::ReadScanLog(cmp_grid_from), c.grid_resolution, c.grid);
    const gridmap::GridScanPredictor grid_predictor(grid);
    auto field_map = OpenMap(cmp_model, "", "", "", sampling);
    std::vector<std::pair<std::string, eval::ScanQualityReport>> rows;
    rows.emplace_back("nof", ScanQualityOver(*field_map->predictor, log, c.scan_threshold, nullptr));
    if (!cmp_nog.empty()) {
      auto nog_map = OpenMap("", cmp_nog, "", "", sampling);
      rows.emplace_back("nog", ScanQualityOver(*nog_map->predictor, log, c.scan_threshold, nullptr));
    }
    rows.emplace_back("bresenham", ScanQualityOver(grid_predictor, log, c.scan_threshold, nullptr));
    std::string text = "method      avg_err_m  acc_pct  chamfer_m  f_score\n";
    char buf[128];
    for (const auto& [name, r] : rows) {
      std::snprintf(buf, sizeof(buf), "%-10s  %9.4f  %7.2f  %9.4f  %7.4f\n", name.c_str(),
                    r.avg_abs_error, r.acc, r.chamfer, r.f_score);
      text += buf;
    }
    Emit(cmp_out, text);
    return 0;
  }

  if (*carmen_cmd) {
    const auto c = carmen_c.Load();
    io::CarmenOptions options;
    if (carmen_config_lidar) options.lidar = c.lidar;
    const auto parsed = io::ReadCarmen(carmen_in, options);
    io::WriteScanLog(parsed.log, carmen_out);
    std::cout << "flaser " << parsed.report.flaser_lines << "\n"
              << "odom " << parsed.report.odom_lines << "\n"
              << "skipped " << parsed.report.skipped_lines << "\n"
              << "ignored " << parsed.report.ignored_lines << "\n";
    return 0;
  }

  if (*ref_cmd) {
    Emit(ref_out, io::ConfigReference());
    return 0;
  }

  if (*plot_cmd) {
    std::vector<io::Series> series;
    if (!plot_report.empty()) {
      io::Series geo, val;
      for (const auto& r : train::ParseTrainReport(io::ReadFileText(plot_report))) {
        geo.emplace_back(r.epoch, r.geometric);
        if (r.validation_mae) val.emplace_back(r.epoch, *r.validation_mae);
      }
      series.push_back(geo);
      if (!val.empty()) series.push_back(val);
    } else if (!plot_series.empty()) {
      std::istringstream in(io::ReadFileText(plot_series));
      std::string line;
      std::getline(in, line);
      io::Series s;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto v = ParseNumbers(line, 2, "series row");
        s.emplace_back(v[0], v[1]);
      }
      series.push_back(s);
    } else {
      throw UsageError("plot needs --report or --series");
    }
    io::WritePgm(io::LinePlot(series), plot_out);
    return 0;
  }

  if (*world_cmd) {
    sim::WriteWorld(sim::builtin_world(world_name), world_out);
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace nofmcl

int main(int argc, char** argv) {
  try {
    return nofmcl::Run(argc, argv);
  } catch (const nofmcl::Error& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    std::fprintf(stderr, "error code=%d kind=%s message=%s\n", static_cast<int>(e.code()),
                 nofmcl::ErrorCodeName(e.code()), msg.c_str());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& ch : msg) {
      if (ch == '\n') ch = ' ';
    }
    std::fprintf(stderr, "error code=2 kind=input message=%s\n", msg.c_str());
    return 2;
  }
}
