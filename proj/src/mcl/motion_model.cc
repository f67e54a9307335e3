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

#include "nofmcl/mcl/motion_model.h"

#include <cmath>

#include "nofmcl/core/error.h"

namespace nofmcl::mcl {

void MotionNoise::Validate() const {
  if (!(alpha1 >= 0.0 && alpha2 >= 0.0 && alpha3 >= 0.0 && alpha4 >= 0.0)) {
    throw InputError("motion noise: alpha coefficients must be non-negative");
  }
}

OdometryDecomposition Decompose(const Pose2& delta) {
  OdometryDecomposition d;
  d.trans = std::hypot(delta.x(), delta.y());
  // Below this the heading of the translation is meaningless.
  d.rot1 = d.trans < 1e-9 ? 0.0 : std::atan2(delta.y(), delta.x());
  d.rot2 = WrapAngle(delta.theta() - d.rot1);
  return d;
}

Pose2 Recompose(const OdometryDecomposition& d) {
  return {d.trans * std::cos(d.rot1), d.trans * std::sin(d.rot1),
          d.rot1 + d.rot2};
}

Pose2 SampleOdometry(const Pose2& delta, const MotionNoise& noise, Rng& rng) {
  if (noise.is_zero()) return delta;
  const OdometryDecomposition d = Decompose(delta);
  const double r1 = d.rot1 * d.rot1;
  const double r2 = d.rot2 * d.rot2;
  const double t2 = d.trans * d.trans;
  OdometryDecomposition noisy;
  noisy.rot1 = d.rot1 + rng.normal() * std::sqrt(noise.alpha1 * r1 + noise.alpha2 * t2);
  noisy.trans = d.trans + rng.normal() * std::sqrt(noise.alpha3 * t2 + noise.alpha4 * (r1 + r2));
  noisy.rot2 = d.rot2 + rng.normal() * std::sqrt(noise.alpha1 * r2 + noise.alpha2 * t2);
  return Recompose(noisy);
}

}  // namespace nofmcl::mcl
