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

#include "gtest/gtest.h"
#include "nofmcl/core/error.h"
#include "nofmcl/gridmap/occ_grid.h"
#include "nofmcl/io/container.h"
#include "nofmcl/sim/simulator.h"
#include "nofmcl/sim/world.h"
#include "test_util.h"

namespace nofmcl::gridmap {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Bresenham, EndpointsAndConnectivity) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Vector2i a(rng.uniform_index(40), rng.uniform_index(40));
    const Eigen::Vector2i b(rng.uniform_index(40), rng.uniform_index(40));
    const auto line = bresenham(a, b);
    ASSERT_FALSE(line.empty());
    EXPECT_EQ(line.front(), a);
    EXPECT_EQ(line.back(), b);
    const auto d = (b - a).cwiseAbs();
    EXPECT_EQ(line.size(), static_cast<std::size_t>(std::max(d.x(), d.y()) + 1));
    for (std::size_t i = 1; i < line.size(); ++i) {
      const auto step = (line[i] - line[i - 1]).cwiseAbs();
      EXPECT_LE(step.maxCoeff(), 1);
    }
  }
}

TEST(Bresenham, HorizontalLine) {
  const auto line = bresenham({0, 0}, {3, 0});
  ASSERT_EQ(line.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(line[i], Eigen::Vector2i(i, 0));
}

io::ScanLog OneBeam(double range) {
  io::ScanLog log;
  log.params.num_beams = 1;
  log.params.range_max = 10.0;
  io::LogFrame f;
  f.pose = Pose2(0.25, 0.25, 0.0);
  f.ranges = {range};
  log.frames.push_back(f);
  return log;
}

TEST(BuildGrid, SingleBeamUpdates) {
  const auto grid = build_grid(OneBeam(5.0), 0.5, {}, Box2{Vec2(0, 0), Vec2(8, 1)});
  // Start cell 0 through hit cell 10 along row 0.
  for (int ix = 0; ix < 10; ++ix) EXPECT_FLOAT_EQ(grid.at(ix, 0), -0.4f) << ix;
  EXPECT_FLOAT_EQ(grid.at(10, 0), 0.9f);
  EXPECT_FLOAT_EQ(grid.at(11, 0), 0.0f);
  EXPECT_FLOAT_EQ(grid.at(5, 1), 0.0f);
}

TEST(BuildGrid, NoReturnClearsToRangeMax) {
  const auto grid = build_grid(OneBeam(kNoReturn), 0.5, {}, Box2{Vec2(0, 0), Vec2(12, 1)});
  for (int ix = 0; ix <= 20; ++ix) EXPECT_FLOAT_EQ(grid.at(ix, 0), -0.4f) << ix;
  EXPECT_FLOAT_EQ(grid.at(21, 0), 0.0f);
}

TEST(BuildGrid, ClampsLogOdds) {
  io::ScanLog log = OneBeam(2.0);
  for (int i = 0; i < 40; ++i) log.frames.push_back(log.frames[0]);
  const auto grid = build_grid(log, 0.5, {}, Box2{Vec2(0, 0), Vec2(4, 1)});
  EXPECT_FLOAT_EQ(grid.at(4, 0), 10.0f);
  EXPECT_FLOAT_EQ(grid.at(1, 0), -10.0f);
}

TEST(BuildGrid, EmptyLogIsAnError) {
  io::ScanLog log;
  log.params.num_beams = 1;
  EXPECT_THROW(build_grid(log, 0.05), InputError);
}

LidarParams Ring() {
  LidarParams p;
  p.num_beams = 180;
  p.angle_min = -kPi;
  p.angle_max = kPi - 2 * kPi / 180;
  p.range_min = 0.1;
  p.range_max = 15.0;
  return p;
}

TEST(BuildGrid, RoomWallsWithinOneCell) {
  const auto room = sim::builtin_world("room");
  Rng rng(1);
  const auto poses = sample_free_poses(room, {Vec2(1, 1), Vec2(9, 7)}, 40, 0.5, rng);
  const auto log = sim::scans_at_poses(room, poses, Ring(), 0.0, rng);
  const auto grid = build_grid(log, 0.05);
  int occupied = 0;
  for (int iy = 0; iy < grid.height; ++iy) {
    for (int ix = 0; ix < grid.width; ++ix) {
      if (grid.probability(ix, iy) > 0.5) {
        ++occupied;
        EXPECT_LE(sim::DistanceToWalls(room, grid.cell_center(ix, iy)), 0.05 * std::sqrt(2.0));
      }
    }
  }
  // The perimeter is 36 m, about 720 cells.
  EXPECT_GT(occupied, 600);
}

TEST(Raycast, MatchesOracleWithinOneCellDiagonal) {
  const auto room = sim::builtin_world("room");
  Rng rng(2);
  const auto poses = sample_free_poses(room, {Vec2(1, 1), Vec2(9, 7)}, 60, 0.5, rng);
  const auto grid = build_grid(sim::scans_at_poses(room, poses, Ring(), 0.0, rng), 0.05);
  const Pose2 centre(5, 4, 0.3);
  const auto rendered = raycast_grid(grid, centre, Ring());
  const auto truth = sim::cast_scan(room, centre, Ring());
  for (int i = 0; i < Ring().num_beams; ++i) {
    ASSERT_TRUE(HasReturn(rendered.ranges[i])) << i;
    EXPECT_LE(std::abs(rendered.ranges[i] - truth.ranges[i]), 0.05 * std::sqrt(2.0) + 1e-9) << i;
  }
}

TEST(Raycast, FreeGridHasNoReturns) {
  OccGrid grid;
  grid.resolution = 0.1;
  grid.width = 50;
  grid.height = 50;
  grid.log_odds.assign(2500, -1.0f);
  const auto scan = raycast_grid(grid, Pose2(2.5, 2.5, 0), Ring());
  for (double r : scan.ranges) EXPECT_FALSE(HasReturn(r));
}

TEST(Raycast, EvenOddsCountAsFree) {
  OccGrid grid;
  grid.resolution = 1.0;
  grid.width = 5;
  grid.height = 1;
  grid.log_odds = {0, 0, 0.0f, 0.01f, 0};
  EXPECT_DOUBLE_EQ(grid.probability(2, 0), 0.5);
  const double r = raycast_beam(grid, Ray{Vec2(0.5, 0.5), Vec2(1, 0)}, 0.0, 10.0);
  EXPECT_DOUBLE_EQ(r, 3.0);
}

TEST(Raycast, StartOutsideIsNoReturn) {
  OccGrid grid;
  grid.width = 4;
  grid.height = 4;
  grid.resolution = 1.0;
  grid.log_odds.assign(16, 5.0f);
  EXPECT_FALSE(HasReturn(raycast_beam(grid, Ray{Vec2(-1, 1), Vec2(1, 0)}, 0.0, 10.0)));
}

TEST(GridSource, LogisticOfLogOdds) {
  OccGrid grid;
  grid.resolution = 1.0;
  grid.width = 2;
  grid.height = 1;
  grid.log_odds = {0.0f, 2.0f};
  const GridSource src(grid);
  std::vector<Vec2> pts = {Vec2(0.5, 0.5), Vec2(1.5, 0.5), Vec2(5, 5)};
  std::vector<double> p(3);
  src.Query(pts, p);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_NEAR(p[1], 1 / (1 + std::exp(-2.0)), 1e-7);
  EXPECT_EQ(p[2], 0.0);
}

TEST(GridFile, RoundTripIsByteIdentical) {
  testing::TempDir dir;
  const auto grid = build_grid(OneBeam(3.0), 0.25, {}, Box2{Vec2(0, 0), Vec2(4, 1)});
  SaveGrid(grid, dir / "a.grid");
  const auto back = LoadGrid(dir / "a.grid");
  EXPECT_EQ(back, grid);
  SaveGrid(back, dir / "b.grid");
  EXPECT_EQ(io::ReadFileBytes(dir / "a.grid"), io::ReadFileBytes(dir / "b.grid"));
}

}  // namespace
}  // namespace nofmcl::gridmap
