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

#ifndef NOFMCL_FIELD_FIELD_MODEL_H_
#define NOFMCL_FIELD_FIELD_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nofmcl/core/pose2.h"
#include "nofmcl/field/encoding.h"

namespace nofmcl::field {

struct FieldConfig {
  EncodingConfig encoding;
  int hidden_width = 256;
  int num_hidden_layers = 8;
  // running = momentum * running + (1 - momentum) * batch
  double norm_momentum = 0.9;
  double norm_epsilon = 1e-5;
  // Initial value of the output bias (a logit).
  double head_bias_init = 0.0;

  void Validate() const;
  bool operator==(const FieldConfig&) const = default;
};

enum class Mode { kTrain, kInfer };

enum class ParamKind { kWeight, kBias, kNormScale, kNormShift, kHeadWeight, kHeadBias };

// True for the parameter classes that receive weight decay.
inline bool IsDecayed(ParamKind kind) {
  return kind == ParamKind::kWeight || kind == ParamKind::kHeadWeight;
}

template <typename Scalar>
struct ParamRef {
  ParamKind kind;
  int layer;  // -1 for the output head
  Scalar* data;
  std::size_t size;
};

// All trainable tensors of the network. The same layout holds parameters,
// gradients and optimizer moments.
template <typename Scalar>
struct FieldTensors {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Layer {
    Matrix weight;  // out x in
    Vector bias;
    Vector scale;   // normalization gamma
    Vector shift;   // normalization beta
  };

  std::vector<Layer> layers;
  Vector head_weight;
  Scalar head_bias = 0;

  static FieldTensors ZerosLike(const FieldTensors& other);
  std::vector<ParamRef<Scalar>> refs();
  std::size_t num_params() const;
};

// Occupancy field: encoding -> num_hidden_layers x [dense, batch norm, ReLU]
// -> dense -> sigmoid. Layers after the first add an identity shortcut
// around their branch: out = in + relu(norm(W in + b)).
template <typename Scalar>
class FieldModelT {
 public:
  using Matrix = typename FieldTensors<Scalar>::Matrix;
  using Vector = typename FieldTensors<Scalar>::Vector;

  FieldModelT() = default;
  FieldModelT(const FieldConfig& config, uint64_t seed);

  const FieldConfig& config() const { return config_; }
  FieldTensors<Scalar>& params() { return params_; }
  const FieldTensors<Scalar>& params() const { return params_; }
  std::vector<Vector>& running_mean() { return running_mean_; }
  const std::vector<Vector>& running_mean() const { return running_mean_; }
  std::vector<Vector>& running_var() { return running_var_; }
  const std::vector<Vector>& running_var() const { return running_var_; }

  // Throws NumericError if any parameter or running statistic is not
  // finite.
  void CheckFinite() const;

  // Pre-sigmoid outputs in inference mode. Evaluation runs in fixed-width
  // column blocks, so a point's logit does not depend on the rest of the
  // batch.
  Vector InferLogits(std::span<const Vec2> points) const;

  // Training-mode forward pass over the whole batch: normalization uses
  // batch statistics. Activations are cached for Backward().
  Vector TrainLogits(std::span<const Vec2> points,
                     bool update_running_stats = true);

  // Gradients of the loss w.r.t. every trainable parameter, given the
  // loss gradient w.r.t. the logits of the last TrainLogits() call. Throws
  // std::logic_error without a matching forward pass.
  FieldTensors<Scalar> BackwardLogits(std::span<const Scalar> dloss_dlogit);

  // Same, with the upstream gradient taken w.r.t. the occupancy
  // probabilities of the last training forward pass.
  FieldTensors<Scalar> Backward(std::span<const double> dloss_dprob);

  bool has_cache() const { return cache_.has_value(); }
  void ClearCache() { cache_.reset(); }

  static constexpr int kInferBlock = 256;

 private:
  struct Cache {
    std::vector<Matrix> inputs;      // input of each hidden layer
    std::vector<Matrix> normalized;  // x-hat of each hidden layer
    std::vector<Vector> inv_std;
    Matrix features;                 // output of the last hidden layer
    Vector logits;
  };

  Matrix Encode(std::span<const Vec2> points) const;

  FieldConfig config_;
  FieldTensors<Scalar> params_;
  std::vector<Vector> running_mean_;
  std::vector<Vector> running_var_;
  std::optional<Cache> cache_;
};

using FieldModel = FieldModelT<float>;

double Sigmoid(double logit);

// p = F(p) for each point. Inference mode is read-only; training mode uses
// batch statistics over the whole input and updates running statistics.
template <typename Scalar>
std::vector<double> occupancy_batch(FieldModelT<Scalar>& model,
                                    std::span<const Vec2> points, Mode mode);
template <typename Scalar>
std::vector<double> occupancy_batch(const FieldModelT<Scalar>& model,
                                    std::span<const Vec2> points);

template <typename Scalar>
double occupancy(const FieldModelT<Scalar>& model, const Vec2& p);

// Converts between precisions (used by gradient checks and tooling).
template <typename To, typename From>
FieldModelT<To> CastModel(const FieldModelT<From>& model);

}  // namespace nofmcl::field

#endif  // NOFMCL_FIELD_FIELD_MODEL_H_
