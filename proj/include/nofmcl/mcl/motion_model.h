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

#ifndef NOFMCL_MCL_MOTION_MODEL_H_
#define NOFMCL_MCL_MOTION_MODEL_H_

#include "nofmcl/core/pose2.h"
#include "nofmcl/core/rng.h"

namespace nofmcl::mcl {

// Odometry model noise in the rot1-trans-rot2 decomposition. Each component
// is perturbed by a zero-mean Gaussian with variance
//   rot1:  alpha1 * rot1^2 + alpha2 * trans^2
//   trans: alpha3 * trans^2 + alpha4 * (rot1^2 + rot2^2)
//   rot2:  alpha1 * rot2^2 + alpha2 * trans^2
struct MotionNoise {
  double alpha1 = 0.1;
  double alpha2 = 0.1;
  double alpha3 = 0.05;
  double alpha4 = 0.05;

  static MotionNoise Zero() { return {0.0, 0.0, 0.0, 0.0}; }
  bool is_zero() const {
    return alpha1 == 0.0 && alpha2 == 0.0 && alpha3 == 0.0 && alpha4 == 0.0;
  }
  void Validate() const;
  bool operator==(const MotionNoise&) const = default;
};

struct OdometryDecomposition {
  double rot1 = 0.0;
  double trans = 0.0;
  double rot2 = 0.0;
};

// delta is a relative pose in the robot frame.
OdometryDecomposition Decompose(const Pose2& delta);
Pose2 Recompose(const OdometryDecomposition& d);

// Draws a perturbed copy of `delta`. With zero noise, `delta` is returned
// unchanged.
Pose2 SampleOdometry(const Pose2& delta, const MotionNoise& noise, Rng& rng);

}  // namespace nofmcl::mcl

#endif  // NOFMCL_MCL_MOTION_MODEL_H_
