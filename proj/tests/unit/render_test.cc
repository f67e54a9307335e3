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

#include "gtest/gtest.h"
#include "nofmcl/core/rng.h"
#include "nofmcl/render/occupancy_source.h"
#include "nofmcl/render/scan_predictor.h"
#include "nofmcl/render/volume_render.h"

namespace nofmcl::render {
namespace {

// Occupied beyond `wall` metres along +x from the origin.
FunctionSource StepAlongX(double wall) {
  return FunctionSource([wall](const Vec2& p) { return p.x() >= wall ? 1.0 : 0.0; });
}

TEST(TerminationWeights, FirstOpaqueSampleTakesEverything) {
  const auto a = termination_weights(std::vector<double>{1.0, 0.3, 0.9});
  EXPECT_EQ(a, (std::vector<double>{1.0, 0.0, 0.0}));
}

TEST(TerminationWeights, AllFree) {
  const auto a = termination_weights(std::vector<double>(5, 0.0));
  for (double v : a) EXPECT_EQ(v, 0.0);
}

TEST(TerminationWeights, Halves) {
  const auto a = termination_weights(std::vector<double>{0.5, 0.5, 0.5});
  EXPECT_DOUBLE_EQ(a[0], 0.5);
  EXPECT_DOUBLE_EQ(a[1], 0.25);
  EXPECT_DOUBLE_EQ(a[2], 0.125);
}

TEST(TerminationWeights, RandomVectorsStayInSimplex) {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(300));
    std::vector<double> occ(n), alpha(n);
    for (auto& o : occ) o = rng.uniform();
    const double sum = termination_weights(occ, alpha);
    double check = 0;
    for (double a : alpha) {
      ASSERT_GE(a, 0.0);
      ASSERT_LE(a, 1.0);
      check += a;
    }
    ASSERT_LE(sum, 1.0 + 1e-12);
    ASSERT_NEAR(sum, check, 1e-12);
  }
}

TEST(TerminationWeights, SumIsOneOnlyWithAnOpaquePrefix) {
  std::vector<double> occ = {0.2, 0.4, 1.0, 0.1};
  std::vector<double> alpha(4);
  EXPECT_DOUBLE_EQ(termination_weights(occ, alpha), 1.0);
  occ[2] = 0.999;
  EXPECT_LT(termination_weights(occ, alpha), 1.0);
}

TEST(RaySampling, CellCentres) {
  const RaySampling s{4, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(s.step(), 0.5);
  EXPECT_DOUBLE_EQ(s.distance(0), 1.25);
  EXPECT_DOUBLE_EQ(s.distance(3), 2.75);
}

TEST(RenderRange, OpaqueEverywhereGivesFirstSample) {
  const FunctionSource full([](const Vec2&) { return 1.0; });
  const RaySampling s{256, 0.05, 30.0};
  const auto r = render_range(full, Ray{}, s);
  EXPECT_DOUBLE_EQ(r.range, s.distance(0));
  EXPECT_DOUBLE_EQ(r.escape_mass, 0.0);
}

TEST(RenderRange, EmptyGivesZeroAndFullEscape) {
  const FunctionSource empty([](const Vec2&) { return 0.0; });
  const auto r = render_range(empty, Ray{}, RaySampling{});
  EXPECT_EQ(r.range, 0.0);
  EXPECT_EQ(r.escape_mass, 1.0);
}

TEST(RenderRange, SharpWall) {
  const RaySampling s{256, 0.05, 30.0};
  const auto r = render_range(StepAlongX(5.0), Ray{}, s);
  // The first sample at or beyond 5 m, computed independently.
  double first = 0;
  for (int i = 0; i < 256; ++i) {
    const double m = 0.05 + (i + 0.5) * (30.0 - 0.05) / 256;
    if (m >= 5.0) {
      first = m;
      break;
    }
  }
  EXPECT_DOUBLE_EQ(r.range, first);
  EXPECT_LE(std::abs(r.range - 5.0), 0.117);
}

TEST(RenderRange, MonotoneInWallPosition) {
  const RaySampling s{128, 0.0, 10.0};
  double last = -1;
  for (double wall = 0.5; wall < 9.5; wall += 0.37) {
    const double r = render_range(StepAlongX(wall), Ray{}, s).range;
    EXPECT_GE(r, last);
    last = r;
  }
}

TEST(RenderScan, SingleBeamMatchesRenderRange) {
  LidarParams p;
  p.num_beams = 1;
  p.range_max = 10.0;
  const RaySampling s{64, 0.0, 10.0};
  const auto src = StepAlongX(3.0);
  const Pose2 pose(0.5, 0.0, 0.0);
  const auto scan = render_scan(src, pose, p, s);
  EXPECT_EQ(scan.frame.ranges[0], render_range(src, beam_ray(pose, p, 0), s).range);
}

TEST(RenderScan, BatchedEqualsPerRay) {
  const FunctionSource disc([](const Vec2& q) {
    return std::clamp(2.0 - (q - Vec2(3, 1)).norm(), 0.0, 1.0);
  });
  LidarParams p;
  p.num_beams = 37;
  p.angle_min = -2.0;
  p.angle_max = 2.0;
  p.range_max = 8.0;
  const RaySampling s{100, 0.0, 8.0};
  const Pose2 pose(0.2, -0.3, 0.4);
  const auto scan = render_scan(disc, pose, p, s);
  for (int i = 0; i < p.num_beams; ++i) {
    const auto r = render_range(disc, beam_ray(pose, p, i), s);
    EXPECT_EQ(scan.frame.ranges[i], r.range);
    EXPECT_EQ(scan.escape_mass[i], r.escape_mass);
  }
}

TEST(RenderScan, MaskedMarksEscapedBeams) {
  LidarParams p;
  p.num_beams = 3;
  p.angle_min = -std::acos(-1.0) / 2;
  p.angle_max = std::acos(-1.0) / 2;
  p.range_max = 10.0;
  const auto scan = render_scan(StepAlongX(4.0), Pose2(), p, RaySampling{200, 0.0, 10.0});
  const auto masked = scan.Masked();
  EXPECT_FALSE(HasReturn(masked.ranges[0]));
  EXPECT_TRUE(HasReturn(masked.ranges[1]));
  EXPECT_FALSE(HasReturn(masked.ranges[2]));
}

TEST(VolumeScanPredictor, AgreesWithRenderScan) {
  const auto src = StepAlongX(2.0);
  LidarParams p;
  p.num_beams = 5;
  p.angle_min = -0.5;
  p.angle_max = 0.5;
  p.range_max = 6.0;
  const RaySampling s{90, 0.0, 6.0};
  const VolumeScanPredictor predictor(src, s);
  const std::vector<int> beams = {0, 2, 4};
  std::vector<double> out(3);
  predictor.Predict(Pose2(), p, beams, out);
  const auto masked = render_scan(src, Pose2(), p, s).Masked();
  for (int k = 0; k < 3; ++k) EXPECT_EQ(out[k], masked.ranges[beams[k]]);
}

TEST(RenderRange, SourceImplementationDoesNotMatter) {
  // Two sources that agree at the sample points but not between them.
  const RaySampling s{20, 0.0, 10.0};
  const FunctionSource a([](const Vec2& q) { return q.x() > 6.0 ? 0.8 : 0.1; });
  const FunctionSource b([](const Vec2& q) {
    const double base = q.x() > 6.0 ? 0.8 : 0.1;
    const double frac = std::fmod(q.x(), 0.5);
    return std::abs(frac - 0.25) < 1e-9 ? base : 0.5;
  });
  EXPECT_EQ(render_range(a, Ray{}, s).range, render_range(b, Ray{}, s).range);
}

}  // namespace
}  // namespace nofmcl::render
