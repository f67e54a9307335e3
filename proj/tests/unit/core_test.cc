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
#include <set>

#include "gtest/gtest.h"
#include "nofmcl/core/error.h"
#include "nofmcl/core/lidar.h"
#include "nofmcl/core/pose2.h"
#include "nofmcl/core/rng.h"

namespace nofmcl {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(WrapAngle, MapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(WrapAngle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(WrapAngle(kPi), kPi);
  EXPECT_DOUBLE_EQ(WrapAngle(-kPi), kPi);
  EXPECT_NEAR(WrapAngle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(WrapAngle(2 * kPi + 0.3), 0.3, 1e-12);
  EXPECT_NEAR(WrapAngle(-2 * kPi - 0.3), -0.3, 1e-12);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-50, 50);
    const double w = WrapAngle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(Pose2, ComposeMatchesHomogeneousMatrices) {
  auto matrix = [](const Pose2& p) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m << std::cos(p.theta()), -std::sin(p.theta()), p.x(), std::sin(p.theta()),
        std::cos(p.theta()), p.y(), 0, 0, 1;
    return m;
  };
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Pose2 a(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));
    const Pose2 b(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));
    const Eigen::Matrix3d expected = matrix(a) * matrix(b);
    const Pose2 c = pose_compose(a, b);
    EXPECT_NEAR(c.x(), expected(0, 2), 1e-12);
    EXPECT_NEAR(c.y(), expected(1, 2), 1e-12);
    EXPECT_NEAR(c.theta(), std::atan2(expected(1, 0), expected(0, 0)), 1e-12);

    const Vec2 p(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Eigen::Vector3d hp = matrix(a) * Eigen::Vector3d(p.x(), p.y(), 1.0);
    EXPECT_NEAR((a * p - hp.head<2>()).norm(), 0.0, 1e-12);
  }
}

TEST(Pose2, BetweenInvertsCompose) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Pose2 a(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));
    const Pose2 b(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-4, 4));
    const Pose2 back = pose_compose(a, pose_between(a, b));
    EXPECT_NEAR(back.x(), b.x(), 1e-12);
    EXPECT_NEAR(back.y(), b.y(), 1e-12);
    EXPECT_NEAR(WrapAngle(back.theta() - b.theta()), 0.0, 1e-12);
    const Pose2 id = pose_compose(a, pose_inverse(a));
    EXPECT_NEAR(id.translation().norm(), 0.0, 1e-12);
    EXPECT_NEAR(id.theta(), 0.0, 1e-12);
  }
}

TEST(Box2, ContainsIsInclusive) {
  const Box2 b{Vec2(0, 0), Vec2(2, 1)};
  EXPECT_TRUE(b.contains(Vec2(0, 0)));
  EXPECT_TRUE(b.contains(Vec2(2, 1)));
  EXPECT_FALSE(b.contains(Vec2(2.0001, 0.5)));
  EXPECT_FALSE(b.degenerate());
  EXPECT_TRUE((Box2{Vec2(0, 0), Vec2(0, 1)}).degenerate());
}

TEST(Lidar, BeamAnglesIncludeBothEnds) {
  LidarParams p;
  p.num_beams = 5;
  p.angle_min = -1.0;
  p.angle_max = 1.0;
  EXPECT_DOUBLE_EQ(p.beam_angle(0), -1.0);
  EXPECT_DOUBLE_EQ(p.beam_angle(2), 0.0);
  EXPECT_DOUBLE_EQ(p.beam_angle(4), 1.0);
  p.num_beams = 1;
  EXPECT_DOUBLE_EQ(p.beam_angle(0), -1.0);
}

TEST(Lidar, RaysFollowPoseAndMount) {
  LidarParams p;
  p.num_beams = 3;
  p.angle_min = -kPi / 2;
  p.angle_max = kPi / 2;
  p.mount = Pose2(0.2, 0.0, 0.0);
  const Pose2 pose(1.0, 2.0, kPi / 2);
  const auto rays = beams_of(pose, p);
  ASSERT_EQ(rays.size(), 3u);
  for (const auto& r : rays) {
    EXPECT_NEAR(r.origin.x(), 1.0, 1e-12);
    EXPECT_NEAR(r.origin.y(), 2.2, 1e-12);
    EXPECT_NEAR(r.direction.norm(), 1.0, 1e-12);
  }
  // Beam 0 looks along the robot's right, which is world +x here.
  EXPECT_NEAR(rays[0].direction.x(), 1.0, 1e-12);
  EXPECT_NEAR(rays[1].direction.y(), 1.0, 1e-12);
  EXPECT_NEAR(rays[2].direction.x(), -1.0, 1e-12);
  for (int i = 0; i < 3; ++i) {
    const Ray r = beam_ray(pose, p, i);
    EXPECT_EQ(r.origin, rays[i].origin);
    EXPECT_EQ(r.direction, rays[i].direction);
  }
}

TEST(Lidar, ValidateRejectsBadGeometry) {
  LidarParams p;
  p.num_beams = 0;
  EXPECT_THROW(p.Validate(), InputError);
  p.num_beams = 10;
  p.range_min = 5.0;
  p.range_max = 1.0;
  EXPECT_THROW(p.Validate(), InputError);
  p.range_min = 0.1;
  p.range_max = 10.0;
  p.angle_min = 1.0;
  p.angle_max = -1.0;
  EXPECT_THROW(p.Validate(), InputError);
  p.angle_max = 2.0;
  EXPECT_NO_THROW(p.Validate());
}

TEST(Lidar, NoReturnSentinel) {
  EXPECT_FALSE(HasReturn(kNoReturn));
  EXPECT_TRUE(HasReturn(0.0));
  LidarFrame f{0.0, {1.0, kNoReturn, 2.0}, {}};
  EXPECT_EQ(f.num_returns(), 2);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    differs = differs || x != c.normal();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, MomentsAndRanges) {
  Rng rng(5);
  const int n = 200000;
  double sum = 0, sum2 = 0, usum = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(1.0, 2.0);
    sum += x;
    sum2 += x * x;
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    usum += u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(sum2 / n - mean * mean, 4.0, 0.06);
  EXPECT_NEAR(usum / n, 0.5, 0.005);

  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.uniform_index(7);
    ASSERT_LT(k, 7u);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(9);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  rng.shuffle(v.begin(), v.end());
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Error, CodesAndNames) {
  EXPECT_EQ(static_cast<int>(UsageError("x").code()), 1);
  EXPECT_EQ(static_cast<int>(InputError("x").code()), 2);
  EXPECT_EQ(static_cast<int>(NumericError("x").code()), 3);
  EXPECT_STREQ(ErrorCodeName(ErrorCode::kLocalizationFailed), "localization_failed");
}

}  // namespace
}  // namespace nofmcl
