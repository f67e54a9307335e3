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

#include "nofmcl/field/field_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nofmcl/core/error.h"
#include "nofmcl/core/rng.h"

namespace nofmcl::field {

void FieldConfig::Validate() const {
  if (encoding.num_frequencies < 0 || encoding.dim() < 1) {
    throw InputError("field: encoding must produce at least one feature");
  }
  if (hidden_width < 1 || num_hidden_layers < 1) {
    throw InputError("field: hidden_width and num_hidden_layers must be >= 1");
  }
  if (!(norm_momentum >= 0.0 && norm_momentum < 1.0)) {
    throw InputError("field: norm_momentum must be in [0, 1)");
  }
  if (!(norm_epsilon > 0.0)) {
    throw InputError("field: norm_epsilon must be > 0");
  }
}

template <typename Scalar>
FieldTensors<Scalar> FieldTensors<Scalar>::ZerosLike(const FieldTensors& other) {
  FieldTensors out;
  out.layers.reserve(other.layers.size());
  for (const Layer& l : other.layers) {
    out.layers.push_back(Layer{Matrix::Zero(l.weight.rows(), l.weight.cols()),
                               Vector::Zero(l.bias.size()),
                               Vector::Zero(l.scale.size()),
                               Vector::Zero(l.shift.size())});
  }
  out.head_weight = Vector::Zero(other.head_weight.size());
  out.head_bias = 0;
  return out;
}

template <typename Scalar>
std::vector<ParamRef<Scalar>> FieldTensors<Scalar>::refs() {
  std::vector<ParamRef<Scalar>> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Layer& l = layers[i];
    const int li = static_cast<int>(i);
    out.push_back({ParamKind::kWeight, li, l.weight.data(),
                   static_cast<std::size_t>(l.weight.size())});
    out.push_back({ParamKind::kBias, li, l.bias.data(),
                   static_cast<std::size_t>(l.bias.size())});
    out.push_back({ParamKind::kNormScale, li, l.scale.data(),
                   static_cast<std::size_t>(l.scale.size())});
    out.push_back({ParamKind::kNormShift, li, l.shift.data(),
                   static_cast<std::size_t>(l.shift.size())});
  }
  out.push_back({ParamKind::kHeadWeight, -1, head_weight.data(),
                 static_cast<std::size_t>(head_weight.size())});
  out.push_back({ParamKind::kHeadBias, -1, &head_bias, 1});
  return out;
}

template <typename Scalar>
std::size_t FieldTensors<Scalar>::num_params() const {
  std::size_t n = 1 + head_weight.size();
  for (const Layer& l : layers) {
    n += l.weight.size() + l.bias.size() + l.scale.size() + l.shift.size();
  }
  return n;
}

template <typename Scalar>
FieldModelT<Scalar>::FieldModelT(const FieldConfig& config, uint64_t seed)
    : config_(config) {
  config_.Validate();
  Rng rng(seed);
  const int width = config_.hidden_width;
  int fan_in = config_.encoding.dim();
  for (int l = 0; l < config_.num_hidden_layers; ++l) {
    typename FieldTensors<Scalar>::Layer layer;
    // Kaiming-uniform for ReLU: U(-sqrt(6 / fan_in), sqrt(6 / fan_in)).
    const double w_bound = std::sqrt(6.0 / fan_in);
    const double b_bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    layer.weight.resize(width, fan_in);
    for (Eigen::Index j = 0; j < layer.weight.cols(); ++j) {
      for (Eigen::Index i = 0; i < layer.weight.rows(); ++i) {
        layer.weight(i, j) = static_cast<Scalar>(rng.uniform(-w_bound, w_bound));
      }
    }
    layer.bias.resize(width);
    for (Eigen::Index i = 0; i < width; ++i) {
      layer.bias(i) = static_cast<Scalar>(rng.uniform(-b_bound, b_bound));
    }
    layer.scale = Vector::Ones(width);
    layer.shift = Vector::Zero(width);
    params_.layers.push_back(std::move(layer));
    running_mean_.push_back(Vector::Zero(width));
    running_var_.push_back(Vector::Ones(width));
    fan_in = width;
  }
  const double h_bound = 1.0 / std::sqrt(static_cast<double>(width));
  params_.head_weight.resize(width);
  for (Eigen::Index i = 0; i < width; ++i) {
    params_.head_weight(i) = static_cast<Scalar>(rng.uniform(-h_bound, h_bound));
  }
  params_.head_bias = static_cast<Scalar>(config_.head_bias_init);
}

template <typename Scalar>
void FieldModelT<Scalar>::CheckFinite() const {
  auto finite = [](const auto& m) { return m.allFinite(); };
  bool ok = std::isfinite(static_cast<double>(params_.head_bias)) &&
            finite(params_.head_weight);
  for (std::size_t l = 0; ok && l < params_.layers.size(); ++l) {
    const auto& layer = params_.layers[l];
    ok = finite(layer.weight) && finite(layer.bias) && finite(layer.scale) &&
         finite(layer.shift) && finite(running_mean_[l]) &&
         finite(running_var_[l]) && (running_var_[l].array() >= 0).all();
  }
  if (!ok) {
    throw NumericError("field: model contains non-finite parameters");
  }
}

template <typename Scalar>
typename FieldModelT<Scalar>::Matrix FieldModelT<Scalar>::Encode(
    std::span<const Vec2> points) const {
  Matrix x(config_.encoding.dim(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    EncodeInto(points[i], config_.encoding, x.col(i).data());
  }
  return x;
}

template <typename Scalar>
typename FieldModelT<Scalar>::Vector FieldModelT<Scalar>::InferLogits(
    std::span<const Vec2> points) const {
  CheckFinite();
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Vector logits(n);
  const int width = config_.hidden_width;
  const Scalar eps = static_cast<Scalar>(config_.norm_epsilon);

  // Fold normalization into a per-row affine map: y = a * z + c.
  std::vector<Vector> gain(params_.layers.size());
  std::vector<Vector> offset(params_.layers.size());
  for (std::size_t l = 0; l < params_.layers.size(); ++l) {
    const auto& layer = params_.layers[l];
    gain[l] = layer.scale.array() /
              (running_var_[l].array() + eps).sqrt();
    offset[l] = layer.shift.array() +
                gain[l].array() * (layer.bias - running_mean_[l]).array();
  }

  // Every block has exactly kInferBlock columns (zero padded), so the matrix
  // products run with identical shapes and a point's result is independent
  // of its batch.
  Matrix x = Matrix::Zero(config_.encoding.dim(), kInferBlock);
  Matrix z(width, kInferBlock);
  Matrix h(width, kInferBlock);
  for (Eigen::Index start = 0; start < n; start += kInferBlock) {
    const Eigen::Index count = std::min<Eigen::Index>(kInferBlock, n - start);
    x.setZero();
    for (Eigen::Index i = 0; i < count; ++i) {
      EncodeInto(points[start + i], config_.encoding, x.col(i).data());
    }
    for (std::size_t l = 0; l < params_.layers.size(); ++l) {
      const auto& layer = params_.layers[l];
      if (l == 0) {
        z.noalias() = layer.weight * x;
      } else {
        z.noalias() = layer.weight * h;
      }
      z = ((z.array().colwise() * gain[l].array()).colwise() +
           offset[l].array())
              .cwiseMax(Scalar(0));
      if (l == 0) {
        h = z;
      } else {
        h += z;
      }
    }
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> out =
        params_.head_weight.transpose() * h;
    for (Eigen::Index i = 0; i < count; ++i) {
      logits(start + i) = out(i) + params_.head_bias;
    }
  }
  return logits;
}

template <typename Scalar>
typename FieldModelT<Scalar>::Vector FieldModelT<Scalar>::TrainLogits(
    std::span<const Vec2> points, bool update_running_stats) {
  if (points.empty()) {
    throw std::invalid_argument("field: empty training batch");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  const Scalar eps = static_cast<Scalar>(config_.norm_epsilon);
  const Scalar momentum = static_cast<Scalar>(config_.norm_momentum);

  Cache cache;
  Matrix x = Encode(points);
  for (std::size_t l = 0; l < params_.layers.size(); ++l) {
    const auto& layer = params_.layers[l];
    Matrix z = layer.weight * x;
    z.colwise() += layer.bias;
    const Vector mean = z.rowwise().mean();
    z.colwise() -= mean;
    const Vector var = z.array().square().rowwise().mean();
    const Vector inv_std = (var.array() + eps).rsqrt();
    z.array().colwise() *= inv_std.array();  // x-hat
    if (update_running_stats) {
      const Scalar unbias =
          n > 1 ? static_cast<Scalar>(n) / static_cast<Scalar>(n - 1) : Scalar(1);
      running_mean_[l] = momentum * running_mean_[l] + (1 - momentum) * mean;
      running_var_[l] =
          momentum * running_var_[l] + (1 - momentum) * unbias * var;
    }
    Matrix y = ((z.array().colwise() * layer.scale.array()).colwise() +
                layer.shift.array())
                   .cwiseMax(Scalar(0));
    cache.inputs.push_back(std::move(x));
    cache.normalized.push_back(std::move(z));
    cache.inv_std.push_back(inv_std);
    if (l == 0) {
      x = std::move(y);
    } else {
      x = cache.inputs.back() + y;
    }
  }
  cache.logits = (params_.head_weight.transpose() * x).transpose();
  cache.logits.array() += params_.head_bias;
  cache.features = std::move(x);
  Vector logits = cache.logits;
  cache_ = std::move(cache);
  return logits;
}

template <typename Scalar>
FieldTensors<Scalar> FieldModelT<Scalar>::BackwardLogits(
    std::span<const Scalar> dloss_dlogit) {
  if (!cache_) {
    throw std::logic_error("field: Backward() without a training forward pass");
  }
  const Cache& cache = *cache_;
  const Eigen::Index n = cache.logits.size();
  if (static_cast<Eigen::Index>(dloss_dlogit.size()) != n) {
    throw std::logic_error("field: upstream gradient size does not match the "
                           "last forward pass");
  }
  // Copied into aligned storage: the vectorized reductions below must not
  // depend on where the caller's buffer happens to live.
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dlogit =
      Eigen::Map<const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>>(dloss_dlogit.data(), n);

  FieldTensors<Scalar> grads = FieldTensors<Scalar>::ZerosLike(params_);
  grads.head_weight = cache.features * dlogit.transpose();
  grads.head_bias = dlogit.sum();

  // Gradient w.r.t. the current layer output.
  Matrix dout = params_.head_weight * dlogit;
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
  for (int l = static_cast<int>(params_.layers.size()) - 1; l >= 0; --l) {
    const auto& layer = params_.layers[l];
    auto& g = grads.layers[l];
    const Matrix& xhat = cache.normalized[l];
    // dY through ReLU; the mask is recomputed from x-hat.
    Matrix dy = (((xhat.array().colwise() * layer.scale.array()).colwise() +
                  layer.shift.array()) > Scalar(0))
                    .select(dout.array(), Scalar(0));
    g.scale = (dy.array() * xhat.array()).rowwise().sum();
    g.shift = dy.rowwise().sum();
    // Batch-norm backward, written in terms of x-hat.
    dy.array().colwise() *= layer.scale.array();  // d x-hat
    const Vector sum_dxhat = dy.rowwise().sum();
    const Vector sum_dxhat_xhat = (dy.array() * xhat.array()).rowwise().sum();
    Matrix dz = dy;
    dz.colwise() -= sum_dxhat * inv_n;
    dz.array() -= xhat.array().colwise() * (sum_dxhat_xhat * inv_n).array();
    dz.array().colwise() *= cache.inv_std[l].array();
    g.weight.noalias() = dz * cache.inputs[l].transpose();
    g.bias = dz.rowwise().sum();
    if (l > 0) {
      // Shortcut path plus branch path.
      dout += layer.weight.transpose() * dz;
    }
  }
  return grads;
}

template <typename Scalar>
FieldTensors<Scalar> FieldModelT<Scalar>::Backward(
    std::span<const double> dloss_dprob) {
  if (!cache_) {
    throw std::logic_error("field: Backward() without a training forward pass");
  }
  const Vector& logits = cache_->logits;
  if (static_cast<Eigen::Index>(dloss_dprob.size()) != logits.size()) {
    throw std::logic_error("field: upstream gradient size does not match the "
                           "last forward pass");
  }
  std::vector<Scalar> dlogit(dloss_dprob.size());
  for (std::size_t i = 0; i < dlogit.size(); ++i) {
    const double p = Sigmoid(static_cast<double>(logits(i)));
    dlogit[i] = static_cast<Scalar>(dloss_dprob[i] * p * (1.0 - p));
  }
  return BackwardLogits(dlogit);
}

double Sigmoid(double logit) {
  // Kept strictly inside (0, 1) even where the double result would round.
  constexpr double kLo = std::numeric_limits<double>::denorm_min();
  constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::clamp(1.0 / (1.0 + std::exp(-logit)), kLo, kHi);
}

template <typename Scalar>
std::vector<double> occupancy_batch(FieldModelT<Scalar>& model,
                                    std::span<const Vec2> points, Mode mode) {
  if (points.empty()) {
    throw std::invalid_argument("field: empty batch");
  }
  if (mode == Mode::kInfer) {
    return occupancy_batch(static_cast<const FieldModelT<Scalar>&>(model),
                           points);
  }
  model.CheckFinite();
  const auto logits = model.TrainLogits(points);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Sigmoid(static_cast<double>(logits(i)));
  }
  return out;
}

template <typename Scalar>
std::vector<double> occupancy_batch(const FieldModelT<Scalar>& model,
                                    std::span<const Vec2> points) {
  const auto logits = model.InferLogits(points);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Sigmoid(static_cast<double>(logits(i)));
  }
  return out;
}

template <typename Scalar>
double occupancy(const FieldModelT<Scalar>& model, const Vec2& p) {
  return occupancy_batch(model, std::span<const Vec2>(&p, 1))[0];
}

template <typename To, typename From>
FieldModelT<To> CastModel(const FieldModelT<From>& model) {
  FieldModelT<To> out(model.config(), 0);
  const auto& src = model.params();
  auto& dst = out.params();
  for (std::size_t l = 0; l < src.layers.size(); ++l) {
    dst.layers[l].weight = src.layers[l].weight.template cast<To>();
    dst.layers[l].bias = src.layers[l].bias.template cast<To>();
    dst.layers[l].scale = src.layers[l].scale.template cast<To>();
    dst.layers[l].shift = src.layers[l].shift.template cast<To>();
    out.running_mean()[l] = model.running_mean()[l].template cast<To>();
    out.running_var()[l] = model.running_var()[l].template cast<To>();
  }
  dst.head_weight = src.head_weight.template cast<To>();
  dst.head_bias = static_cast<To>(src.head_bias);
  return out;
}

template struct FieldTensors<float>;
template struct FieldTensors<double>;
template class FieldModelT<float>;
template class FieldModelT<double>;
template std::vector<double> occupancy_batch(FieldModelT<float>&,
                                             std::span<const Vec2>, Mode);
template std::vector<double> occupancy_batch(FieldModelT<double>&,
                                             std::span<const Vec2>, Mode);
template std::vector<double> occupancy_batch(const FieldModelT<float>&,
                                             std::span<const Vec2>);
template std::vector<double> occupancy_batch(const FieldModelT<double>&,
                                             std::span<const Vec2>);
template double occupancy(const FieldModelT<float>&, const Vec2&);
template double occupancy(const FieldModelT<double>&, const Vec2&);
template FieldModelT<double> CastModel(const FieldModelT<float>&);
template FieldModelT<float> CastModel(const FieldModelT<double>&);
template FieldModelT<float> CastModel(const FieldModelT<float>&);
template FieldModelT<double> CastModel(const FieldModelT<double>&);

}  // namespace nofmcl::field
