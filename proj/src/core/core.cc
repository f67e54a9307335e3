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

#include <cmath>
#include <numbers>
#include <string>

#include "nofmcl/core/error.h"
#include "nofmcl/core/lidar.h"
#include "nofmcl/core/pose2.h"

namespace nofmcl {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return "usage";
    case ErrorCode::kInput:
      return "input";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kLocalizationFailed:
      return "localization_failed";
  }
  return "unknown";
}

double WrapAngle(double theta) {
  constexpr double kPi = std::numbers::pi;
  if (theta > -kPi && theta <= kPi) return theta;
  double wrapped = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Vec2 Pose2::operator*(const Vec2& local) const {
  const double c = std::cos(theta_);
  const double s = std::sin(theta_);
  return {x_ + c * local.x() - s * local.y(),
          y_ + s * local.x() + c * local.y()};
}

Pose2 pose_compose(const Pose2& a, const Pose2& delta) {
  const Vec2 t = a * delta.translation();
  return {t.x(), t.y(), a.theta() + delta.theta()};
}

Pose2 pose_inverse(const Pose2& a) {
  const double c = std::cos(a.theta());
  const double s = std::sin(a.theta());
  return {-c * a.x() - s * a.y(), s * a.x() - c * a.y(), -a.theta()};
}

Pose2 pose_between(const Pose2& from, const Pose2& to) {
  const double c = std::cos(from.theta());
  const double s = std::sin(from.theta());
  const double dx = to.x() - from.x();
  const double dy = to.y() - from.y();
  return {c * dx + s * dy, -s * dx + c * dy, to.theta() - from.theta()};
}

void LidarParams::Validate() const {
  if (num_beams < 1) {
    throw InputError("lidar: num_beams must be >= 1");
  }
  if (num_beams > 1 && !(angle_min < angle_max)) {
    throw InputError("lidar: angle_min must be < angle_max");
  }
  if (!(range_min >= 0.0) || !(range_min < range_max) ||
      !std::isfinite(range_max)) {
    throw InputError("lidar: need 0 <= range_min < range_max");
  }
}

int LidarFrame::num_returns() const {
  int n = 0;
  for (double r : ranges) n += HasReturn(r) ? 1 : 0;
  return n;
}

Ray beam_ray(const Pose2& pose, const LidarParams& params, int i) {
  const Pose2 sensor = pose_compose(pose, params.mount);
  // Heading is left unwrapped so consecutive beams stay angularly monotone.
  const double angle = sensor.theta() + params.beam_angle(i);
  return Ray{sensor.translation(), Vec2(std::cos(angle), std::sin(angle))};
}

std::vector<Ray> beams_of(const Pose2& pose, const LidarParams& params) {
  std::vector<Ray> rays;
  rays.reserve(params.num_beams);
  for (int i = 0; i < params.num_beams; ++i) {
    rays.push_back(beam_ray(pose, params, i));
  }
  return rays;
}

}  // namespace nofmcl
