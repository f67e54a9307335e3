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

#include "nofmcl/io/run_config.h"

#include <map>
#include <numbers>

#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"
#include "nofmcl/io/scan_log.h"

namespace nofmcl::io {

using nlohmann::json;

namespace {

json Alphas(const mcl::MotionNoise& n) {
  return {n.alpha1, n.alpha2, n.alpha3, n.alpha4};
}

mcl::MotionNoise AlphasFromJson(const json& j, const std::string& key) {
  const auto a = j.get<std::vector<double>>();
  if (a.size() != 4) throw InputError("config: " + key + " needs 4 values");
  return {a[0], a[1], a[2], a[3]};
}

const std::map<std::string, std::string>& Descriptions() {
  static const std::map<std::string, std::string> kDescriptions = {
      {"seed", "Seed for simulation, training and filtering unless overridden"},
      {"lidar.num_beams", "Beams per scan"},
      {"lidar.angle_min", "Angle of the first beam (rad, sensor frame)"},
      {"lidar.angle_max", "Angle of the last beam (rad, inclusive)"},
      {"lidar.range_min", "Minimum valid range (m)"},
      {"lidar.range_max", "Maximum valid range (m); also the far end of ray sampling"},
      {"lidar.mount", "Sensor pose in the robot frame [x, y, theta]"},
      {"sim.speed", "Robot speed along the waypoint path (m/s)"},
      {"sim.turn_rate", "In-place turning rate (rad/s)"},
      {"sim.scan_rate", "Scans per second (Hz)"},
      {"sim.odom_noise", "Odometry noise alphas of the simulated robot"},
      {"sim.range_noise_std", "Gaussian range noise (m)"},
      {"sim.max_frames", "Stop after this many frames (0: whole path)"},
      {"train.field.num_frequencies", "Positional encoding frequencies L"},
      {"train.field.include_input", "Prepend the raw coordinates to the encoding"},
      {"train.field.hidden_width", "Hidden layer width D"},
      {"train.field.num_hidden_layers", "Hidden layers"},
      {"train.field.norm_momentum", "Batch-norm running-average momentum"},
      {"train.field.norm_epsilon", "Batch-norm epsilon"},
      {"train.field.head_bias_init", "Initial output logit"},
      {"train.batch_size", "Rays per optimizer step"},
      {"train.epochs", "Training epochs"},
      {"train.learning_rate", "Initial Adam learning rate"},
      {"train.lr_decay_epochs", "Epochs (0-based) at which the rate is multiplied by lr_decay_factor"},
      {"train.lr_decay_factor", "Step decay factor"},
      {"train.weight_decay", "Decoupled weight decay on dense weights"},
      {"train.lambda_reg", "Weight of the occupancy regularizer"},
      {"train.samples_per_ray", "Samples N per ray for training and rendering"},
      {"train.adam_beta1", "Adam beta1"},
      {"train.adam_beta2", "Adam beta2"},
      {"train.adam_eps", "Adam epsilon"},
      {"train.rng_seed", "Initialization and shuffling seed"},
      {"train.holdout_fraction", "Tail fraction of frames held out for validation"},
      {"train.validate_every_epoch", "Render the held-out frames after every epoch"},
      {"nog.resolution", "NOG cell size (m)"},
      {"filter.init_particles", "Particles during global initialization"},
      {"filter.tracking_particles", "Particles after convergence"},
      {"filter.convergence_spread", "Spread (m) below which the filter counts as converged"},
      {"filter.resample_ess_fraction", "Resample when ESS < fraction * M"},
      {"filter.rng_seed", "Filter seed"},
      {"filter.motion", "Odometry motion model alphas"},
      {"filter.map_bounds", "Particle bounds [xmin, ymin, xmax, ymax]; null: NOG or world extent"},
      {"observation.sigma", "Observation model sigma (m)"},
      {"observation.beam_subsample", "Beams compared per particle (0: all)"},
      {"observation.floor_likelihood", "Likelihood of a particle sharing no valid beam with the scan"},
      {"eval.init_window", "Seconds excluded from APE after the first estimate"},
      {"eval.max_gap", "Maximum time gap when pairing estimates with truth (s)"},
      {"eval.scan_threshold", "Threshold for Acc, chamfer matching and F-score (m)"},
      {"grid.resolution", "Baseline grid cell size (m)"},
      {"grid.free_update", "Log-odds added to traversed cells"},
      {"grid.hit_update", "Log-odds added to hit cells"},
      {"grid.clamp", "Log-odds clamp magnitude"},
  };
  return kDescriptions;
}

void ListKeys(const json& j, const std::string& prefix, std::string& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      ListKeys(value, path, out);
      continue;
    }
    const auto it = Descriptions().find(path);
    out += "| `" + path + "` | `" + value.dump() + "` | " +
           (it != Descriptions().end() ? it->second : "") + " |\n";
  }
}

}  // namespace

RunConfig RunConfig::Defaults() {
  RunConfig c;
  c.lidar.num_beams = 181;
  c.lidar.angle_min = -0.75 * std::numbers::pi;
  c.lidar.angle_max = 0.75 * std::numbers::pi;
  c.lidar.range_min = 0.1;
  c.lidar.range_max = 15.0;
  return c;
}

void RunConfig::Validate() const {
  lidar.Validate();
  train.Validate();
  if (!(nog_resolution > 0.0)) throw InputError("config: nog.resolution must be > 0");
  if (!(grid_resolution > 0.0)) throw InputError("config: grid.resolution must be > 0");
  if (!(scan_threshold > 0.0)) throw InputError("config: eval.scan_threshold must be > 0");
  if (!(sim.speed > 0.0) || !(sim.turn_rate > 0.0) || !(sim.scan_rate > 0.0) ||
      !(sim.range_noise_std >= 0.0) || sim.max_frames < 0) {
    throw InputError("config: bad sim section");
  }
  sim.odom_noise.Validate();
  grid.Validate();
  mcl::FilterConfig f = filter;
  f.map_bounds = map_bounds.value_or(Box2{Vec2(0, 0), Vec2(1, 1)});
  f.Validate();
}

json RunConfigToJson(const RunConfig& c) {
  json bounds = nullptr;
  if (c.map_bounds) {
    bounds = {c.map_bounds->min.x(), c.map_bounds->min.y(), c.map_bounds->max.x(),
              c.map_bounds->max.y()};
  }
  return {
      {"seed", c.seed},
      {"lidar", LidarParamsToJson(c.lidar)},
      {"sim",
       {{"speed", c.sim.speed},
        {"turn_rate", c.sim.turn_rate},
        {"scan_rate", c.sim.scan_rate},
        {"odom_noise", Alphas(c.sim.odom_noise)},
        {"range_noise_std", c.sim.range_noise_std},
        {"max_frames", c.sim.max_frames}}},
      {"train", train::TrainConfigToJson(c.train)},
      {"nog", {{"resolution", c.nog_resolution}}},
      {"filter",
       {{"init_particles", c.filter.init_particles},
        {"tracking_particles", c.filter.tracking_particles},
        {"convergence_spread", c.filter.convergence_spread},
        {"resample_ess_fraction", c.filter.resample_ess_fraction},
        {"rng_seed", c.filter.rng_seed},
        {"motion", Alphas(c.filter.motion)},
        {"map_bounds", bounds}}},
      {"observation",
       {{"sigma", c.filter.observation.sigma},
        {"beam_subsample", c.filter.observation.beam_subsample},
        {"floor_likelihood", c.filter.observation.floor_likelihood}}},
      {"eval",
       {{"init_window", c.ape.init_window},
        {"max_gap", c.ape.max_gap},
        {"scan_threshold", c.scan_threshold}}},
      {"grid",
       {{"resolution", c.grid_resolution},
        {"free_update", c.grid.free_update},
        {"hit_update", c.grid.hit_update},
        {"clamp", c.grid.clamp}}},
  };
}

void MergeStrict(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) {
    throw InputError("config: " + (prefix.empty() ? std::string("top level") : prefix) +
                     " must be an object");
  }
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) throw InputError("config: unknown key '" + path + "'");
    json& target = base[key];
    if (target.is_object()) {
      MergeStrict(target, value, path);
    } else {
      target = value;
    }
  }
}

RunConfig RunConfigFromJson(const json& patch) {
  json j = RunConfigToJson(RunConfig::Defaults());
  MergeStrict(j, patch);
  RunConfig c = RunConfig::Defaults();
  std::string section;
  try {
    section = "seed";
    c.seed = j.at("seed").get<uint64_t>();
    section = "lidar";
    c.lidar = LidarParamsFromJson(j.at("lidar"));
    section = "sim";
    const json& s = j.at("sim");
    c.sim.speed = s.at("speed").get<double>();
    c.sim.turn_rate = s.at("turn_rate").get<double>();
    c.sim.scan_rate = s.at("scan_rate").get<double>();
    c.sim.odom_noise = AlphasFromJson(s.at("odom_noise"), "sim.odom_noise");
    c.sim.range_noise_std = s.at("range_noise_std").get<double>();
    c.sim.max_frames = s.at("max_frames").get<int>();
    section = "train";
    c.train = train::TrainConfigFromJson(j.at("train"));
    section = "nog";
    c.nog_resolution = j.at("nog").at("resolution").get<double>();
    section = "filter";
    const json& f = j.at("filter");
    c.filter.init_particles = f.at("init_particles").get<int>();
    c.filter.tracking_particles = f.at("tracking_particles").get<int>();
    c.filter.convergence_spread = f.at("convergence_spread").get<double>();
    c.filter.resample_ess_fraction = f.at("resample_ess_fraction").get<double>();
    c.filter.rng_seed = f.at("rng_seed").get<uint64_t>();
    c.filter.motion = AlphasFromJson(f.at("motion"), "filter.motion");
    if (!f.at("map_bounds").is_null()) {
      const auto b = f.at("map_bounds").get<std::vector<double>>();
      if (b.size() != 4) throw InputError("config: filter.map_bounds needs 4 values");
      c.map_bounds = Box2{Vec2(b[0], b[1]), Vec2(b[2], b[3])};
    }
    section = "observation";
    const json& o = j.at("observation");
    c.filter.observation.sigma = o.at("sigma").get<double>();
    c.filter.observation.beam_subsample = o.at("beam_subsample").get<int>();
    c.filter.observation.floor_likelihood = o.at("floor_likelihood").get<double>();
    section = "eval";
    const json& e = j.at("eval");
    c.ape.init_window = e.at("init_window").get<double>();
    c.ape.max_gap = e.at("max_gap").get<double>();
    c.scan_threshold = e.at("scan_threshold").get<double>();
    section = "grid";
    const json& g = j.at("grid");
    c.grid_resolution = g.at("resolution").get<double>();
    c.grid.free_update = g.at("free_update").get<double>();
    c.grid.hit_update = g.at("hit_update").get<double>();
    c.grid.clamp = g.at("clamp").get<double>();
  } catch (const json::exception& e) {
    throw InputError("config: bad value in section '" + section + "': " + e.what());
  }
  c.Validate();
  return c;
}

RunConfig ReadRunConfig(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFileText(path));
  } catch (const json::exception& e) {
    throw InputError("config: " + path.string() + ": " + e.what());
  }
  return RunConfigFromJson(j);
}

std::string ConfigReference() {
  std::string out =
      "# Configuration reference\n\n"
      "Configuration files are JSON objects. A file only needs the keys it\n"
      "changes; every other key keeps the default below. Unknown keys are\n"
      "rejected.\n\n"
      "| Key | Default | Meaning |\n|---|---|---|\n";
  ListKeys(RunConfigToJson(RunConfig::Defaults()), "", out);
  return out;
}

}  // namespace nofmcl::io
