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
#include "nofmcl/core/rng.h"
#include "nofmcl/field/checkpoint.h"
#include "nofmcl/field/encoding.h"
#include "nofmcl/field/field_model.h"
#include "nofmcl/io/container.h"
#include "test_util.h"

namespace nofmcl::field {
namespace {

FieldConfig Tiny(int width = 8, int layers = 3) {
  FieldConfig c;
  c.encoding.num_frequencies = 3;
  c.hidden_width = width;
  c.num_hidden_layers = layers;
  return c;
}

std::vector<Vec2> RandomPoints(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
  return pts;
}

TEST(Encoding, OriginIsSinZeroCosOne) {
  const auto e = encode(Vec2(0, 0), EncodingConfig{});
  ASSERT_EQ(e.size(), 42u);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[1], 0.0);
  for (int l = 0; l < 10; ++l) {
    EXPECT_EQ(e[2 + 4 * l + 0], 0.0);
    EXPECT_EQ(e[2 + 4 * l + 1], 0.0);
    EXPECT_EQ(e[2 + 4 * l + 2], 1.0);
    EXPECT_EQ(e[2 + 4 * l + 3], 1.0);
  }
}

TEST(Encoding, FirstBlockAtQuarterTurn) {
  const auto e = encode(Vec2(std::numbers::pi / 2, 0), EncodingConfig{});
  EXPECT_NEAR(e[2], 1.0, 1e-15);
  EXPECT_NEAR(e[3], 0.0, 1e-15);
  EXPECT_NEAR(e[4], 0.0, 1e-15);
  EXPECT_NEAR(e[5], 1.0, 1e-15);
}

TEST(Encoding, Dimensions) {
  EXPECT_EQ((EncodingConfig{10, true}).dim(), 42);
  EXPECT_EQ((EncodingConfig{10, false}).dim(), 40);
  EXPECT_EQ((EncodingConfig{0, true}).dim(), 2);
  const Vec2 p(0.37, -1.2);
  const auto e = encode(p, EncodingConfig{4, false});
  for (int l = 0; l < 4; ++l) {
    const double f = std::ldexp(1.0, l);
    EXPECT_DOUBLE_EQ(e[4 * l + 0], std::sin(f * p.x()));
    EXPECT_DOUBLE_EQ(e[4 * l + 1], std::sin(f * p.y()));
    EXPECT_DOUBLE_EQ(e[4 * l + 2], std::cos(f * p.x()));
    EXPECT_DOUBLE_EQ(e[4 * l + 3], std::cos(f * p.y()));
  }
}

TEST(FieldModel, OutputsAreProbabilities) {
  const FieldModel model(Tiny(16, 4), 7);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p(rng.uniform(-100, 100), rng.uniform(-100, 100));
    const double o = occupancy(model, p);
    EXPECT_GT(o, 0.0);
    EXPECT_LT(o, 1.0);
  }
}

TEST(FieldModel, InferenceIsDeterministicAndBatchIndependent) {
  const FieldModel model(Tiny(), 3);
  const auto pts = RandomPoints(600, 4);
  const auto a = occupancy_batch(model, std::span<const Vec2>(pts));
  const auto b = occupancy_batch(model, std::span<const Vec2>(pts));
  EXPECT_EQ(a, b);
  // A point evaluated alone gives the bit-identical value.
  for (int i : {0, 255, 256, 599}) {
    EXPECT_EQ(occupancy(model, pts[i]), a[i]);
  }
}

TEST(FieldModel, SeedDeterminesInitialization) {
  const FieldModel a(Tiny(), 11), b(Tiny(), 11), c(Tiny(), 12);
  const Vec2 p(0.5, 0.25);
  EXPECT_EQ(occupancy(a, p), occupancy(b, p));
  EXPECT_NE(occupancy(a, p), occupancy(c, p));
}

TEST(FieldModel, ParameterCountMatchesArchitecture) {
  const FieldConfig c = Tiny(8, 3);
  const FieldModel model(c, 0);
  const std::size_t in = c.encoding.dim();
  const std::size_t d = c.hidden_width;
  const std::size_t expected = (in * d + 3 * d) + 2 * (d * d + 3 * d) + d + 1;
  EXPECT_EQ(model.params().num_params(), expected);
}

TEST(FieldModel, TrainModeUpdatesRunningStatistics) {
  FieldModel model(Tiny(), 5);
  const auto before = model.running_mean()[0];
  const auto pts = RandomPoints(64, 2);
  occupancy_batch(model, std::span<const Vec2>(pts), Mode::kTrain);
  const auto after = model.running_mean()[0];
  EXPECT_GT((after - before).norm(), 0.0);
  // Inference does not touch them.
  occupancy_batch(model, std::span<const Vec2>(pts), Mode::kInfer);
  EXPECT_EQ((model.running_mean()[0] - after).norm(), 0.0);
}

TEST(FieldModel, RunningStatisticsUseMomentum) {
  FieldModelT<double> model(Tiny(4, 1), 5);
  const auto pts = RandomPoints(32, 8);
  const auto m0 = model.running_mean()[0];
  model.TrainLogits(pts);
  // Oracle: batch mean of the first pre-normalization layer output.
  const auto& p = model.params().layers[0];
  Eigen::VectorXd batch_mean = Eigen::VectorXd::Zero(p.weight.rows());
  std::vector<double> enc(model.config().encoding.dim());
  for (const auto& x : pts) {
    EncodeInto(x, model.config().encoding, enc.data());
    batch_mean += p.weight * Eigen::Map<Eigen::VectorXd>(enc.data(), enc.size()) + p.bias;
  }
  batch_mean /= pts.size();
  const Eigen::VectorXd expected = 0.9 * m0 + 0.1 * batch_mean;
  EXPECT_LT((model.running_mean()[0] - expected).norm(), 1e-12);
}

TEST(FieldModel, BackwardWithoutForwardThrows) {
  FieldModelT<double> model(Tiny(), 1);
  std::vector<double> g(4, 1.0);
  EXPECT_THROW(model.BackwardLogits(g), std::logic_error);
}

// Central differences of sum_i c_i * logit_i (training mode) against
// BackwardLogits for every parameter.
TEST(FieldModel, BackwardMatchesFiniteDifferences) {
  FieldModelT<double> model(Tiny(6, 3), 21);
  const auto pts = RandomPoints(10, 3);
  Rng rng(4);
  std::vector<double> c(pts.size());
  for (auto& v : c) v = rng.uniform(-1, 1);
  auto objective = [&](FieldModelT<double>& m) {
    const auto logits = m.TrainLogits(pts, false);
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * logits[i];
    return s;
  };
  objective(model);
  auto grads = model.BackwardLogits(c);
  auto analytic = grads.refs();
  auto params = model.params().refs();
  ASSERT_EQ(analytic.size(), params.size());
  double num2 = 0, diff2 = 0, ana2 = 0;
  const double h = 1e-6;
  for (std::size_t r = 0; r < params.size(); ++r) {
    for (std::size_t k = 0; k < params[r].size; ++k) {
      double& w = params[r].data[k];
      const double saved = w;
      w = saved + h;
      const double up = objective(model);
      w = saved - h;
      const double down = objective(model);
      w = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = analytic[r].data[k];
      num2 += numeric * numeric;
      ana2 += a * a;
      diff2 += (numeric - a) * (numeric - a);
    }
  }
  EXPECT_LT(std::sqrt(diff2) / std::max(std::sqrt(num2), std::sqrt(ana2)), 1e-6);
}

TEST(FieldModel, CheckFiniteCatchesCorruption) {
  FieldModel model(Tiny(), 1);
  EXPECT_NO_THROW(model.CheckFinite());
  model.params().layers[1].weight(0, 0) = std::nanf("");
  EXPECT_THROW(model.CheckFinite(), NumericError);
}

TEST(FieldModel, CastPreservesValues) {
  const FieldModel f(Tiny(), 9);
  const auto d = CastModel<double>(f);
  const auto back = CastModel<float>(d);
  const Vec2 p(0.1, 0.9);
  EXPECT_NEAR(occupancy(d, p), occupancy(f, p), 1e-5);
  EXPECT_EQ(occupancy(back, p), occupancy(f, p));
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  testing::TempDir dir;
  FieldModel model(Tiny(), 13);
  const auto pts = RandomPoints(16, 1);
  occupancy_batch(model, std::span<const Vec2>(pts), Mode::kTrain);
  SaveModel(model, dir / "a.nof");
  const FieldModel loaded = LoadModel(dir / "a.nof");
  SaveModel(loaded, dir / "b.nof");
  EXPECT_EQ(io::ReadFileBytes(dir / "a.nof"), io::ReadFileBytes(dir / "b.nof"));
  EXPECT_EQ(loaded.config(), model.config());
  for (const auto& p : pts) EXPECT_EQ(occupancy(loaded, p), occupancy(model, p));
}

TEST(Checkpoint, RejectsWrongTypeAndGarbage) {
  testing::TempDir dir;
  io::Container other;
  other.type = "something.else";
  io::WriteContainer(other, dir / "x.bin");
  EXPECT_THROW(LoadModel(dir / "x.bin"), InputError);
  io::WriteFileAtomic(dir / "y.bin", std::string("not a model"));
  EXPECT_THROW(LoadModel(dir / "y.bin"), InputError);
  EXPECT_THROW(LoadModel(dir / "missing.bin"), InputError);
}

TEST(Checkpoint, ConfigJsonIsStrict) {
  const FieldConfig c = Tiny(12, 2);
  EXPECT_EQ(FieldConfigFromJson(FieldConfigToJson(c)), c);
  auto j = FieldConfigToJson(c);
  j.erase("hidden_width");
  EXPECT_THROW(FieldConfigFromJson(j), InputError);
}

}  // namespace
}  // namespace nofmcl::field
