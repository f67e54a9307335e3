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

#include "nofmcl/sim/simulator.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nofmcl/core/error.h"

namespace nofmcl::sim {
namespace {

struct Leg {
  Pose2 from;
  Pose2 to;
  double start = 0.0;
  double duration = 0.0;
};

// Waypoints that follow `points` with the heading aligned to the direction
// of travel and in-place turns at the corners.
std::vector<Pose2> AlignedPath(const std::vector<Vec2>& points) {
  std::vector<Pose2> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Vec2 d = points[i + 1] - points[i];
    const double heading = std::atan2(d.y(), d.x());
    out.emplace_back(points[i].x(), points[i].y(), heading);
    out.emplace_back(points[i + 1].x(), points[i + 1].y(), heading);
  }
  return out;
}

}  // namespace

void TrajectorySpec::Validate() const {
  if (waypoints.empty()) throw InputError("trajectory: no waypoints");
  if (!(speed > 0.0) || !(turn_rate > 0.0)) {
    throw InputError("trajectory: speed and turn_rate must be > 0");
  }
  if (!(scan_rate > 0.0)) throw InputError("trajectory: scan_rate must be > 0");
  if (!(range_noise_std >= 0.0)) {
    throw InputError("trajectory: range_noise_std must be >= 0");
  }
  if (max_frames < 0) throw InputError("trajectory: max_frames must be >= 0");
  odom_noise.Validate();
}

std::vector<TimedPose> SampleTrajectory(const TrajectorySpec& spec) {
  spec.Validate();
  std::vector<Leg> legs;
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < spec.waypoints.size(); ++i) {
    const Pose2& a = spec.waypoints[i];
    const Pose2& b = spec.waypoints[i + 1];
    const double dist = (b.translation() - a.translation()).norm();
    const double turn = std::abs(WrapAngle(b.theta() - a.theta()));
    const double duration = std::max(dist / spec.speed, turn / spec.turn_rate);
    if (duration <= 0.0) continue;
    legs.push_back({a, b, t, duration});
    t += duration;
  }
  const double total = t;
  const double dt = 1.0 / spec.scan_rate;

  std::vector<TimedPose> out;
  std::size_t leg = 0;
  for (int k = 0;; ++k) {
    const double tk = k * dt;
    if (tk > total + 1e-9) break;
    if (spec.max_frames > 0 && k >= spec.max_frames) break;
    if (legs.empty()) {
      out.push_back({tk, spec.waypoints.front()});
      break;
    }
    while (leg + 1 < legs.size() && tk >= legs[leg].start + legs[leg].duration) {
      ++leg;
    }
    const Leg& l = legs[leg];
    const double f = std::clamp((tk - l.start) / l.duration, 0.0, 1.0);
    const Vec2 p = (1.0 - f) * l.from.translation() + f * l.to.translation();
    const double heading =
        l.from.theta() + f * WrapAngle(l.to.theta() - l.from.theta());
    out.push_back({tk, Pose2(p.x(), p.y(), heading)});
  }
  return out;
}

LidarFrame NoisyScan(const WorldMap& world, const Pose2& pose,
                     const LidarParams& params, double range_noise_std,
                     Rng& rng) {
  LidarFrame frame = cast_scan(world, pose, params);
  if (range_noise_std > 0.0) {
    for (double& r : frame.ranges) {
      if (!HasReturn(r)) continue;
      r = std::clamp(r + rng.normal(0.0, range_noise_std), params.range_min,
                     params.range_max);
    }
  }
  return frame;
}

SimulatedLog generate_log(const WorldMap& world, const TrajectorySpec& spec,
                          const LidarParams& params, Rng& rng) {
  params.Validate();
  spec.Validate();
  for (const Pose2& w : spec.waypoints) {
    if (!world.bounds.contains(w.translation())) {
      throw InputError("trajectory: waypoint leaves the world bounds");
    }
  }
  SimulatedLog out;
  out.truth = SampleTrajectory(spec);
  out.log.params = params;
  for (std::size_t k = 0; k < out.truth.size(); ++k) {
    const TimedPose& tp = out.truth[k];
    io::LogFrame f;
    f.timestamp = tp.timestamp;
    f.pose = tp.pose;
    if (k == 0) {
      f.odometry = Pose2::Identity();
    } else {
      const Pose2 delta = pose_between(out.truth[k - 1].pose, tp.pose);
      f.odometry = mcl::SampleOdometry(delta, spec.odom_noise, rng);
    }
    f.ranges = NoisyScan(world, tp.pose, params, spec.range_noise_std, rng).ranges;
    out.log.frames.push_back(std::move(f));
  }
  return out;
}

std::vector<Pose2> sample_free_poses(const WorldMap& world, const Box2& region,
                                     int count, double clearance, Rng& rng) {
  std::vector<Pose2> out;
  out.reserve(count);
  const int max_attempts = 1000 * std::max(count, 1);
  for (int attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count;
       ++attempt) {
    const Vec2 p(rng.uniform(region.min.x(), region.max.x()),
                 rng.uniform(region.min.y(), region.max.y()));
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    if (DistanceToWalls(world, p) < clearance) continue;
    out.emplace_back(p.x(), p.y(), theta);
  }
  if (static_cast<int>(out.size()) < count) {
    throw InputError("sim: could not place the requested number of free poses");
  }
  return out;
}

io::ScanLog scans_at_poses(const WorldMap& world, const std::vector<Pose2>& poses,
                           const LidarParams& params, double range_noise_std,
                           Rng& rng) {
  io::ScanLog log;
  log.params = params;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    io::LogFrame f;
    f.timestamp = static_cast<double>(i);
    f.pose = poses[i];
    f.ranges = NoisyScan(world, poses[i], params, range_noise_std, rng).ranges;
    log.frames.push_back(std::move(f));
  }
  return log;
}

TrajectorySpec builtin_trajectory(const std::string& world_name) {
  TrajectorySpec spec;
  if (world_name == "room") {
    spec.waypoints = AlignedPath({{2, 2}, {8, 2}, {8, 6}, {2, 6}, {2, 2}, {8, 2}});
  } else if (world_name == "office") {
    spec.waypoints = AlignedPath({{1.5, 1.5}, {1.5, 6.5}, {3.5, 6.5}, {3.5, 4},
                                  {7, 4}, {7, 6.5}, {10.5, 6.5}, {10.5, 1.5},
                                  {6.5, 1.5}});
  } else if (world_name == "corridor-loop") {
    spec.waypoints = AlignedPath({{0.75, 0.75}, {11.25, 0.75}, {11.25, 8.25},
                                  {0.75, 8.25}, {0.75, 0.75}});
  } else {
    throw InputError("no built-in trajectory for world '" + world_name + "'");
  }
  return spec;
}

nlohmann::json TrajectorySpecToJson(const TrajectorySpec& spec) {
  nlohmann::json wps = nlohmann::json::array();
  for (const auto& w : spec.waypoints) wps.push_back({w.x(), w.y(), w.theta()});
  return {{"waypoints", wps},
          {"speed", spec.speed},
          {"turn_rate", spec.turn_rate},
          {"scan_rate", spec.scan_rate},
          {"odom_noise",
           {spec.odom_noise.alpha1, spec.odom_noise.alpha2, spec.odom_noise.alpha3,
            spec.odom_noise.alpha4}},
          {"range_noise_std", spec.range_noise_std},
          {"max_frames", spec.max_frames}};
}

TrajectorySpec TrajectorySpecFromJson(const nlohmann::json& j) {
  TrajectorySpec spec;
  static const char* kKeys[] = {"waypoints", "speed", "turn_rate", "scan_rate",
                                "odom_noise", "range_noise_std", "max_frames"};
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKeys)) {
      throw InputError("trajectory: unknown key '" + key + "'");
    }
  }
  try {
    for (const auto& w : j.at("waypoints")) {
      const auto v = w.get<std::vector<double>>();
      if (v.size() != 3) throw InputError("trajectory: waypoints are [x, y, theta]");
      spec.waypoints.emplace_back(v[0], v[1], v[2]);
    }
    if (j.contains("speed")) spec.speed = j.at("speed").get<double>();
    if (j.contains("turn_rate")) spec.turn_rate = j.at("turn_rate").get<double>();
    if (j.contains("scan_rate")) spec.scan_rate = j.at("scan_rate").get<double>();
    if (j.contains("odom_noise")) {
      const auto a = j.at("odom_noise").get<std::vector<double>>();
      if (a.size() != 4) throw InputError("trajectory: odom_noise needs 4 alphas");
      spec.odom_noise = {a[0], a[1], a[2], a[3]};
    }
    if (j.contains("range_noise_std")) {
      spec.range_noise_std = j.at("range_noise_std").get<double>();
    }
    if (j.contains("max_frames")) spec.max_frames = j.at("max_frames").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("trajectory: ") + e.what());
  }
  spec.Validate();
  return spec;
}

}  // namespace nofmcl::sim
