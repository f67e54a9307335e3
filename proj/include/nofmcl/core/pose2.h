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

#ifndef NOFMCL_CORE_POSE2_H_
#define NOFMCL_CORE_POSE2_H_

#include <Eigen/Core>

namespace nofmcl {

using Vec2 = Eigen::Vector2d;

// Wraps an angle into (-pi, pi].
double WrapAngle(double theta);

// Planar pose. The heading is wrapped on construction.
class Pose2 {
 public:
  Pose2() = default;
  Pose2(double x, double y, double theta)
      : x_(x), y_(y), theta_(WrapAngle(theta)) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double theta() const { return theta_; }
  Vec2 translation() const { return {x_, y_}; }

  static Pose2 Identity() { return {}; }

  // Maps a point from this pose's local frame into the parent frame.
  Vec2 operator*(const Vec2& local) const;

  bool operator==(const Pose2&) const = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

// a (+) delta in SE(2): delta is expressed in a's frame.
Pose2 pose_compose(const Pose2& a, const Pose2& delta);

Pose2 pose_inverse(const Pose2& a);

// The delta d with pose_compose(from, d) == to.
Pose2 pose_between(const Pose2& from, const Pose2& to);

struct TimedPose {
  double timestamp = 0.0;
  Pose2 pose;
};

// Axis-aligned box.
struct Box2 {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();

  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
  Vec2 center() const { return 0.5 * (min + max); }
  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y();
  }
  bool contains(const Box2& other) const {
    return contains(other.min) && contains(other.max);
  }
  bool degenerate() const { return !(width() > 0.0) || !(height() > 0.0); }
};

}  // namespace nofmcl

#endif  // NOFMCL_CORE_POSE2_H_
