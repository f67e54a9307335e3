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
#include "nofmcl/core/error.h"
#include "nofmcl/field/field_model.h"
#include "nofmcl/io/container.h"
#include "nofmcl/nog/nog.h"
#include "nofmcl/render/occupancy_source.h"
#include "nofmcl/render/volume_render.h"
#include "nofmcl/sim/world.h"
#include "test_util.h"

namespace nofmcl::nog {
namespace {

TEST(AxisIndex, NearestCellWithLowerIndexOnTies) {
  // Cells of 0.5 m starting at 1.0: [1, 1.5), [1.5, 2), [2, 2.5].
  EXPECT_EQ(Nog::AxisIndex(1.0, 1.0, 0.5, 3), 0);
  EXPECT_EQ(Nog::AxisIndex(1.2, 1.0, 0.5, 3), 0);
  EXPECT_EQ(Nog::AxisIndex(1.5, 1.0, 0.5, 3), 0);
  EXPECT_EQ(Nog::AxisIndex(1.50001, 1.0, 0.5, 3), 1);
  EXPECT_EQ(Nog::AxisIndex(2.5, 1.0, 0.5, 3), 2);
  EXPECT_FALSE(Nog::AxisIndex(0.99, 1.0, 0.5, 3).has_value());
  EXPECT_FALSE(Nog::AxisIndex(2.51, 1.0, 0.5, 3).has_value());
}

TEST(BuildNog, SingleCellHoldsTheCentreValue) {
  const render::FunctionSource src([](const Vec2& p) { return 0.1 * p.x() + 0.05 * p.y(); });
  const Nog nog = build_nog(src, {Vec2(1, 1), Vec2(2, 2)}, 1.0);
  ASSERT_EQ(nog.width, 1);
  ASSERT_EQ(nog.height, 1);
  EXPECT_FLOAT_EQ(nog.values[0], 0.1 * 1.5 + 0.05 * 1.5);
}

TEST(BuildNog, ConstantField) {
  const render::FunctionSource src([](const Vec2&) { return 0.25; });
  const Nog nog = build_nog(src, {Vec2(0, 0), Vec2(3, 2)}, 0.1);
  for (float v : nog.values) EXPECT_EQ(v, 0.25f);
}

TEST(BuildNog, CoversTheBounds) {
  const render::FunctionSource src([](const Vec2&) { return 0.5; });
  const Box2 bounds{Vec2(-1.03, 2.0), Vec2(4.0, 5.01)};
  const Nog nog = build_nog(src, bounds, 0.05);
  EXPECT_TRUE(nog.extent().contains(bounds));
  EXPECT_EQ(nog.width, CellsToCover(bounds.width(), 0.05));
  EXPECT_LT(nog.extent().width(), bounds.width() + 0.05 + 1e-9);
}

TEST(BuildNog, RoomWallsWithinOneCell) {
  const auto room = sim::builtin_world("room");
  // Occupied within 5 cm of a wall.
  const render::FunctionSource walls(
      [&](const Vec2& p) { return sim::DistanceToWalls(room, p) <= 0.05 ? 0.95 : 0.02; });
  const Nog nog = build_nog(walls, {Vec2(0, 0), Vec2(10, 8)}, 0.05);
  EXPECT_EQ(nog.width, 200);
  EXPECT_EQ(nog.height, 160);
  for (int iy = 0; iy < nog.height; ++iy) {
    for (int ix = 0; ix < nog.width; ++ix) {
      const double d = sim::DistanceToWalls(room, nog.cell_center(ix, iy));
      if (nog.value(ix, iy) > 0.5) {
        EXPECT_LE(d, 0.05 + 1e-9);
      } else {
        EXPECT_GT(d, 0.025);
      }
    }
  }
}

TEST(BuildNog, RefusesHugeGrids) {
  const render::FunctionSource src([](const Vec2&) { return 0.0; });
  EXPECT_THROW(build_nog(src, {Vec2(0, 0), Vec2(1000, 1000)}, 0.01, 1'000'000), InputError);
  EXPECT_THROW(build_nog(src, {Vec2(0, 0), Vec2(0, 1)}, 0.05), InputError);
  EXPECT_THROW(build_nog(src, {Vec2(0, 0), Vec2(1, 1)}, 0.0), InputError);
}

TEST(BuildNog, MatchesTheFieldAtCellCentres) {
  field::FieldConfig c;
  c.hidden_width = 16;
  c.num_hidden_layers = 2;
  const field::FieldModel model(c, 3);
  const Nog nog = build_nog(model, {Vec2(0, 0), Vec2(2, 1)}, 0.1);
  for (int iy = 0; iy < nog.height; iy += 3) {
    for (int ix = 0; ix < nog.width; ix += 3) {
      EXPECT_FLOAT_EQ(nog.value(ix, iy),
                      static_cast<float>(field::occupancy(model, nog.cell_center(ix, iy))));
    }
  }
}

Nog Ramp() {
  Nog nog;
  nog.origin = Vec2(0, 0);
  nog.resolution = 1.0;
  nog.width = 3;
  nog.height = 2;
  nog.values = {0.0f, 0.1f, 0.2f, 0.3f, 0.4f, 0.5f};
  return nog;
}

TEST(Lookup, CentresBoundariesAndOutside) {
  const Nog nog = Ramp();
  EXPECT_FLOAT_EQ(lookup(nog, Vec2(1.5, 0.5)), 0.1f);
  EXPECT_FLOAT_EQ(lookup(nog, Vec2(2.5, 1.5)), 0.5f);
  // On the x = 1 boundary the lower index wins.
  EXPECT_FLOAT_EQ(lookup(nog, Vec2(1.0, 0.5)), 0.0f);
  EXPECT_FLOAT_EQ(lookup(nog, Vec2(2.0, 1.0)), 0.1f);
  EXPECT_EQ(lookup(nog, Vec2(-0.1, 0.5)), 0.0);
  EXPECT_EQ(lookup(nog, Vec2(1.0, 2.1)), 0.0);
  EXPECT_EQ(lookup(nog, Vec2(3.01, 0.5)), 0.0);
}

TEST(NogSource, PlugsIntoTheRenderer) {
  const Nog nog = Ramp();
  const NogSource src(nog);
  const auto r = render::render_range(src, Ray{Vec2(0.0, 0.5), Vec2(1, 0)},
                                      render::RaySampling{6, 0.0, 3.0});
  // Samples at 0.25 .. 2.75 read 0, 0, 0.1, 0.1, 0.2, 0.2.
  const std::vector<double> occ = {0, 0, 0.1f, 0.1f, 0.2f, 0.2f};
  const auto expected = render::render_samples(occ, render::RaySampling{6, 0.0, 3.0});
  EXPECT_DOUBLE_EQ(r.range, expected.range);
  EXPECT_GE(r.escape_mass, 0.0);
  EXPECT_LE(r.escape_mass, 1.0);
}

TEST(NogFile, RoundTripIsByteIdentical) {
  testing::TempDir dir;
  const Nog nog = Ramp();
  SaveNog(nog, dir / "a.nog");
  const Nog back = LoadNog(dir / "a.nog");
  EXPECT_EQ(back, nog);
  SaveNog(back, dir / "b.nog");
  EXPECT_EQ(io::ReadFileBytes(dir / "a.nog"), io::ReadFileBytes(dir / "b.nog"));
}

TEST(NogFile, RejectsInconsistentPayload) {
  Nog nog = Ramp();
  nog.values.pop_back();
  EXPECT_THROW(nog.Validate(), InputError);
  nog = Ramp();
  nog.values[2] = 1.5f;
  EXPECT_THROW(nog.Validate(), InputError);
  auto c = NogToContainer(Ramp());
  c.meta["width"] = 4;
  EXPECT_THROW(NogFromContainer(c), InputError);
}

TEST(NogImage, TopRowIsMaxY) {
  const auto img = NogToImage(Ramp());
  ASSERT_EQ(img.width, 3);
  ASSERT_EQ(img.height, 2);
  EXPECT_EQ(img.at(2, 0), io::ProbabilityToGray(0.5f));
  EXPECT_EQ(img.at(0, 1), io::ProbabilityToGray(0.0));
}

}  // namespace
}  // namespace nofmcl::nog
