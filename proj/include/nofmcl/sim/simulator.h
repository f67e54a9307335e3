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

#ifndef NOFMCL_SIM_SIMULATOR_H_
#define NOFMCL_SIM_SIMULATOR_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nofmcl/core/rng.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/mcl/motion_model.h"
#include "nofmcl/sim/world.h"

namespace nofmcl::sim {

struct TrajectorySpec {
  std::vector<Pose2> waypoints;
  double speed = 0.5;      // m/s
  double turn_rate = 0.8;  // rad/s, bounds in-place rotations
  double scan_rate = 5.0;  // Hz
  mcl::MotionNoise odom_noise = mcl::MotionNoise::Zero();
  double range_noise_std = 0.0;
  // Stop after this many frames (0: run the whole path).
  int max_frames = 0;

  void Validate() const;
};

struct SimulatedLog {
  // Frames carry the true pose and the noisy odometry delta.
  io::ScanLog log;
  std::vector<TimedPose> truth;
};

// Poses sampled along the waypoint path at scan_rate. Each leg lasts
// max(distance / speed, |heading change| / turn_rate); position and heading
// are interpolated linearly inside a leg.
std::vector<TimedPose> SampleTrajectory(const TrajectorySpec& spec);

// Throws InputError if a waypoint leaves the world bounds.
SimulatedLog generate_log(const WorldMap& world, const TrajectorySpec& spec,
                          const LidarParams& params, Rng& rng);

// Exact scans plus Gaussian range noise. Noisy ranges are clamped to
// [range_min, range_max]; beams without a hit stay no-return.
LidarFrame NoisyScan(const WorldMap& world, const Pose2& pose,
                     const LidarParams& params, double range_noise_std, Rng& rng);

// Uniform poses inside `region` that keep `clearance` metres from every
// wall. Throws InputError when too few such poses are found.
std::vector<Pose2> sample_free_poses(const WorldMap& world, const Box2& region,
                                     int count, double clearance, Rng& rng);

// A log of independent scans at the given poses (no odometry).
io::ScanLog scans_at_poses(const WorldMap& world, const std::vector<Pose2>& poses,
                           const LidarParams& params, double range_noise_std,
                           Rng& rng);

// A loop through the free space of a built-in world.
TrajectorySpec builtin_trajectory(const std::string& world_name);

nlohmann::json TrajectorySpecToJson(const TrajectorySpec& spec);
TrajectorySpec TrajectorySpecFromJson(const nlohmann::json& j);

}  // namespace nofmcl::sim

#endif  // NOFMCL_SIM_SIMULATOR_H_
