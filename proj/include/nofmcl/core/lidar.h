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

#ifndef NOFMCL_CORE_LIDAR_H_
#define NOFMCL_CORE_LIDAR_H_

#include <cmath>
#include <limits>
#include <vector>

#include "nofmcl/core/pose2.h"

namespace nofmcl {

// Sentinel stored for beams without a detection inside [range_min,
// range_max]. Never compared numerically; test with HasReturn().
inline constexpr double kNoReturn = std::numeric_limits<double>::infinity();

inline bool HasReturn(double range) { return std::isfinite(range); }

struct LidarParams {
  int num_beams = 1;
  double angle_min = 0.0;
  double angle_max = 0.0;
  double range_min = 0.0;
  double range_max = 30.0;
  // Fixed sensor pose in the robot frame.
  Pose2 mount = Pose2::Identity();

  // Throws InputError when the invariants do not hold.
  void Validate() const;

  // Sensor-frame angle of beam i. Endpoints are inclusive, so beams are
  // spaced (angle_max - angle_min) / (num_beams - 1) apart; a single beam
  // sits at angle_min.
  double beam_angle(int i) const {
    if (num_beams <= 1) return angle_min;
    return angle_min + i * (angle_max - angle_min) / (num_beams - 1);
  }

  bool InRange(double range) const {
    return range >= range_min && range <= range_max;
  }

  bool operator==(const LidarParams&) const = default;
};

struct LidarFrame {
  double timestamp = 0.0;
  std::vector<double> ranges;
  LidarParams params;

  int num_returns() const;
};

struct Ray {
  Vec2 origin = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();

  Vec2 at(double distance) const { return origin + distance * direction; }
};

// One ray per beam, in world coordinates, for a robot at `pose`.
std::vector<Ray> beams_of(const Pose2& pose, const LidarParams& params);

// Ray for a single beam; beams_of(pose, params)[i] == beam_ray(...).
Ray beam_ray(const Pose2& pose, const LidarParams& params, int i);

}  // namespace nofmcl

#endif  // NOFMCL_CORE_LIDAR_H_
