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

#ifndef NOFMCL_IO_RUN_CONFIG_H_
#define NOFMCL_IO_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "nofmcl/core/lidar.h"
#include "nofmcl/eval/metrics.h"
#include "nofmcl/gridmap/occ_grid.h"
#include "nofmcl/mcl/particle_filter.h"
#include "nofmcl/train/trainer.h"

namespace nofmcl::io {

struct SimConfig {
  double speed = 0.5;
  double turn_rate = 0.8;
  double scan_rate = 5.0;
  mcl::MotionNoise odom_noise = {0.05, 0.05, 0.02, 0.02};
  double range_noise_std = 0.02;
  int max_frames = 0;
};

// Everything the CLI can be configured with. Files only need to name the
// keys they change; unknown keys are an error.
struct RunConfig {
  LidarParams lidar;
  SimConfig sim;
  train::TrainConfig train;
  double nog_resolution = 0.05;
  mcl::FilterConfig filter;
  // Filter bounds; when absent the NOG extent (or world bounds) is used.
  std::optional<Box2> map_bounds;
  eval::ApeOptions ape;
  double scan_threshold = 0.5;
  gridmap::SensorModel grid;
  double grid_resolution = 0.05;
  uint64_t seed = 0;

  static RunConfig Defaults();
  void Validate() const;
};

nlohmann::json RunConfigToJson(const RunConfig& config);
// Overlays `j` on the defaults. Throws InputError naming the first unknown
// key (as a dotted path) or ill-typed value.
RunConfig RunConfigFromJson(const nlohmann::json& j);
RunConfig ReadRunConfig(const std::filesystem::path& path);

// Markdown page listing every key with its default and meaning.
std::string ConfigReference();

// Recursively copies `patch` into `base`, rejecting keys that `base` does
// not have. `prefix` is prepended to key names in messages.
void MergeStrict(nlohmann::json& base, const nlohmann::json& patch,
                 const std::string& prefix = "");

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_RUN_CONFIG_H_
