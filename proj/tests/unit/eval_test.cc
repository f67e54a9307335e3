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
#include <limits>
#include <numbers>

#include "gtest/gtest.h"
#include "nofmcl/core/error.h"
#include "nofmcl/eval/metrics.h"
#include "nofmcl/sim/world.h"

namespace nofmcl::eval {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<TimedPose> Straight(int n, double dt, double t0 = 0.0) {
  std::vector<TimedPose> out;
  for (int i = 0; i < n; ++i) out.push_back({t0 + i * dt, Pose2(0.1 * i, 0, 0)});
  return out;
}

LidarFrame Frame(std::vector<double> ranges, double amin = 0.0, double amax = 0.0) {
  LidarFrame f;
  f.params.num_beams = static_cast<int>(ranges.size());
  f.params.angle_min = amin;
  f.params.angle_max = ranges.size() > 1 ? amax : amin;
  f.params.range_max = 30;
  f.ranges = std::move(ranges);
  return f;
}

TEST(NearestInTime, TiesGoEarlierAndGapIsEnforced) {
  const auto truth = Straight(3, 1.0);
  EXPECT_EQ(nearest_in_time(truth, 0.5, 1.0), 0u);
  EXPECT_EQ(nearest_in_time(truth, 0.51, 1.0), 1u);
  EXPECT_EQ(nearest_in_time(truth, 2.05, 0.1), 2u);
  EXPECT_FALSE(nearest_in_time(truth, 2.2, 0.1));
  EXPECT_FALSE(nearest_in_time(truth, -0.5, 0.1));
  EXPECT_FALSE(nearest_in_time({}, 0.0, 1.0));
}

TEST(Ape, ConstantOffset) {
  const auto truth = Straight(50, 0.1);
  auto est = truth;
  for (auto& e : est) e.pose = Pose2(e.pose.x(), e.pose.y() + 0.1, e.pose.theta());
  const auto r = ape_report(est, truth, ApeOptions{0.0, 0.1});
  EXPECT_NEAR(r.location_rmse_cm, 10.0, 1e-9);
  EXPECT_EQ(r.pct_location[0], 0.0);
  EXPECT_EQ(r.pct_location[1], 100.0);
  EXPECT_EQ(r.pct_location[2], 100.0);
  EXPECT_EQ(r.yaw_rmse_deg, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.matched, 50);
}

TEST(Ape, YawWrapsAroundPi) {
  std::vector<TimedPose> truth = {{0.0, Pose2(0, 0, 179.0 * kPi / 180.0)}};
  std::vector<TimedPose> est = {{0.0, Pose2(0, 0, -179.0 * kPi / 180.0)}};
  const auto r = ape_report(est, truth, ApeOptions{0.0, 0.1});
  EXPECT_NEAR(r.yaw_rmse_deg, 2.0, 1e-9);
  EXPECT_EQ(r.pct_yaw[2], 100.0);
  EXPECT_EQ(r.pct_yaw[1], 0.0);
}

TEST(Ape, InitWindowAndFailureGate) {
  const auto truth = Straight(100, 0.5);
  auto est = truth;
  // Large errors only in the first 20 s.
  for (auto& e : est) {
    if (e.timestamp < 20.0) e.pose = Pose2(e.pose.x() + 3.0, 0, 0);
  }
  auto r = ape_report(est, truth);
  EXPECT_EQ(r.location_rmse_cm, 0.0);
  EXPECT_EQ(r.matched, 60);
  r = ape_report(est, truth, ApeOptions{0.0, 0.1});
  EXPECT_FALSE(r.converged);
}

TEST(Ape, InvariantToTimestampShift) {
  Rng rng(4);
  auto truth = Straight(200, 0.2);
  auto est = truth;
  for (auto& e : est) {
    e.pose = Pose2(e.pose.x() + rng.normal(0, 0.05), rng.normal(0, 0.05),
                   rng.normal(0, 0.02));
  }
  const auto a = ape_report(est, truth, ApeOptions{5.0, 0.1});
  for (auto& p : truth) p.timestamp += 1234.5;
  for (auto& p : est) p.timestamp += 1234.5;
  const auto b = ape_report(est, truth, ApeOptions{5.0, 0.1});
  EXPECT_NEAR(a.location_rmse_cm, b.location_rmse_cm, 1e-9);
  EXPECT_NEAR(a.yaw_rmse_deg, b.yaw_rmse_deg, 1e-9);
  EXPECT_EQ(a.pct_location, b.pct_location);
  EXPECT_EQ(a.matched, b.matched);
}

TEST(Ape, PercentagesAreMonotone) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto truth = Straight(40, 0.1);
    auto est = truth;
    const double s = rng.uniform(0.01, 0.3);
    for (auto& e : est) {
      e.pose = Pose2(e.pose.x() + rng.normal(0, s), rng.normal(0, s),
                     rng.normal(0, s * 0.1));
    }
    const auto r = ape_report(est, truth, ApeOptions{0.0, 0.1});
    EXPECT_LE(r.pct_location[0], r.pct_location[1]);
    EXPECT_LE(r.pct_location[1], r.pct_location[2]);
    EXPECT_LE(r.pct_yaw[0], r.pct_yaw[1]);
    EXPECT_LE(r.pct_yaw[1], r.pct_yaw[2]);
  }
}

TEST(Ape, NoOverlapIsAnInputError) {
  const auto truth = Straight(10, 0.1);
  const auto est = Straight(10, 0.1, 100.0);
  EXPECT_THROW(ape_report(est, truth, ApeOptions{0.0, 0.1}), InputError);
  EXPECT_THROW(ape_report({}, truth), InputError);
}

TEST(ScanQuality, HalfMetreErrorIsNotAccurate) {
  const auto truth = Frame({5.0, 6.0, 7.0}, -0.5, 0.5);
  const auto rendered = Frame({5.5, 6.5, 7.5}, -0.5, 0.5);
  const auto r = scan_quality(rendered, truth, Pose2());
  EXPECT_NEAR(r.avg_abs_error, 0.5, 1e-12);
  EXPECT_EQ(r.acc, 0.0);
}

TEST(ScanQuality, SingleBeamExample) {
  const auto r = scan_quality(Frame({5.3}), Frame({5.0}), Pose2(1, 2, 0.3));
  EXPECT_NEAR(r.avg_abs_error, 0.3, 1e-12);
  EXPECT_NEAR(r.chamfer, 0.3, 1e-12);
  EXPECT_EQ(r.f_score, 1.0);
  EXPECT_EQ(r.acc, 100.0);
  EXPECT_EQ(r.beams, 1);
}

TEST(ScanQuality, MasksAndErrors) {
  const auto r = scan_quality(Frame({5.0, kNoReturn, 3.0}, 0, 1),
                              Frame({5.0, 4.0, kNoReturn}, 0, 1), Pose2());
  EXPECT_EQ(r.beams, 1);
  EXPECT_EQ(r.avg_abs_error, 0.0);
  EXPECT_THROW(scan_quality(Frame({kNoReturn}), Frame({1.0}), Pose2()), InputError);
  EXPECT_THROW(scan_quality(Frame({1.0}), Frame({1.0, 2.0}, 0, 1), Pose2()), InputError);
}

TEST(ScanQuality, ChamferMatchesBruteForce) {
  const auto room = sim::builtin_world("room");
  LidarParams p;
  p.num_beams = 37;
  p.angle_min = -kPi;
  p.angle_max = kPi * 35.0 / 36.0;
  p.range_max = 15;
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const Pose2 pose(rng.uniform(1, 9), rng.uniform(1, 7), rng.uniform(-kPi, kPi));
    LidarFrame truth = sim::cast_scan(room, pose, p);
    LidarFrame rendered = truth;
    for (double& r : rendered.ranges) r += rng.normal(0, 0.3);
    rendered.ranges[3] = kNoReturn;

    // Oracle: explicit points, both directions, all pairs.
    std::vector<Vec2> a, b;
    for (int i = 0; i < p.num_beams; ++i) {
      const double ang = pose.theta() + p.angle_min + i * (p.angle_max - p.angle_min) / (p.num_beams - 1);
      const Vec2 dir(std::cos(ang), std::sin(ang));
      if (HasReturn(rendered.ranges[i])) a.push_back(pose.translation() + rendered.ranges[i] * dir);
      if (HasReturn(truth.ranges[i])) b.push_back(pose.translation() + truth.ranges[i] * dir);
    }
    auto directed = [](const std::vector<Vec2>& x, const std::vector<Vec2>& y, int& within) {
      double s = 0;
      within = 0;
      for (const auto& u : x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& v : y) best = std::min(best, (u - v).norm());
        s += best;
        within += best <= 0.5;
      }
      return s / x.size();
    };
    int wa = 0, wb = 0;
    const double ca = directed(a, b, wa), cb = directed(b, a, wb);
    const double prec = double(wa) / a.size(), rec = double(wb) / b.size();
    const auto r = scan_quality(rendered, truth, pose);
    EXPECT_NEAR(r.chamfer, 0.5 * (ca + cb), 1e-9);
    EXPECT_NEAR(r.f_score, 2 * prec * rec / (prec + rec), 1e-9);
  }
}

TEST(ScanQuality, AccumulatorPoolsBeams) {
  ScanQualityAccumulator acc;
  acc.Add(scan_quality(Frame({5.3}), Frame({5.0}), Pose2()));
  acc.Add(scan_quality(Frame({1.0, 2.0, 3.0}, 0, 1), Frame({1.0, 2.0, 4.0}, 0, 1), Pose2()));
  const auto m = acc.Mean();
  EXPECT_EQ(m.beams, 4);
  EXPECT_NEAR(m.avg_abs_error, 1.3 / 4, 1e-12);
  EXPECT_NEAR(m.acc, 75.0, 1e-12);
}

TEST(ConvergenceCurve, ErrorsAndGaps) {
  const auto truth = Straight(5, 1.0);
  std::vector<TimedPose> est = {{0.0, Pose2(0, 1, 0)}, {2.0, Pose2(0.2, 0, 0)},
                                {2.5, Pose2()}};
  const auto c = convergence_curve(est, truth, 0.1);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[0].second, 1.0, 1e-12);
  EXPECT_NEAR(c[1].second, 0.0, 1e-12);
  EXPECT_TRUE(std::isnan(c[2].second));
  EXPECT_EQ(SeriesCsv(c, "t", "err").substr(0, 6), "t,err\n");
}

TEST(Bench, OneRowPerVariantAndCount) {
  const auto room = sim::builtin_world("room");
  const sim::ExactScanPredictor exact(room);
  io::ScanLog log;
  log.params.num_beams = 31;
  log.params.angle_min = -1.5;
  log.params.angle_max = 1.5;
  log.params.range_max = 15;
  for (int i = 0; i < 3; ++i) {
    io::LogFrame f;
    f.timestamp = i * 0.1;
    f.odometry = Pose2(0.05, 0, 0);
    f.ranges = sim::cast_scan(room, Pose2(2 + 0.05 * i, 3, 0), log.params).ranges;
    log.frames.push_back(f);
  }
  mcl::FilterConfig base;
  base.map_bounds = room.bounds;
  const auto rows = throughput_bench(log, {{"a", &exact}, {"b", &exact}}, {200, 4000}, base, 2);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].variant, "a");
  EXPECT_EQ(rows[3].particles, 4000);
  for (const auto& r : rows) EXPECT_GT(r.hz, 0.0);
  EXPECT_GT(rows[0].hz, rows[1].hz);
  EXPECT_NE(FormatBench(rows).find("4000"), std::string::npos);
}

}  // namespace
}  // namespace nofmcl::eval
