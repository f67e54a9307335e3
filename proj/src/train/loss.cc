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

#include "nofmcl/train/loss.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nofmcl::train {

double geometric_loss(std::span<const double> rendered,
                      std::span<const double> truth,
                      const std::vector<bool>& valid) {
  if (rendered.size() != truth.size() || rendered.size() != valid.size()) {
    throw std::invalid_argument("geometric_loss: length mismatch");
  }
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (!valid[i]) continue;
    sum += std::abs(rendered[i] - truth[i]);
    ++n;
  }
  return n > 0 ? sum / n : 0.0;
}

double occupancy_regularizer(std::span<const double> occupancy) {
  if (occupancy.empty()) return 0.0;
  double sum = 0.0;
  for (double p : occupancy) {
    const double q = std::clamp(p, kOccClamp, 1.0 - kOccClamp);
    sum += std::log(q) + std::log1p(-q);
  }
  return sum / static_cast<double>(occupancy.size());
}

double regularizer_gradient(double p, std::size_t count) {
  if (p <= kOccClamp || p >= 1.0 - kOccClamp) return 0.0;
  return (1.0 / p - 1.0 / (1.0 - p)) / static_cast<double>(count);
}

std::vector<double> range_gradient(std::span<const double> occupancy,
                                   const render::RaySampling& sampling) {
  const int n = static_cast<int>(occupancy.size());
  std::vector<double> grad(n);
  std::vector<double> tail(n, 0.0);
  for (int k = n - 2; k >= 0; --k) {
    const double o = occupancy[k + 1];
    tail[k] = o * sampling.distance(k + 1) + (1.0 - o) * tail[k + 1];
  }
  double transmittance = 1.0;
  for (int k = 0; k < n; ++k) {
    grad[k] = transmittance * (sampling.distance(k) - tail[k]);
    transmittance *= 1.0 - occupancy[k];
  }
  return grad;
}

template <typename Scalar>
BatchLoss batch_loss(field::FieldModelT<Scalar>& model,
                     std::span<const TrainSample> batch,
                     const render::RaySampling& sampling, double lambda,
                     field::FieldTensors<Scalar>* gradients,
                     bool update_running_stats) {
  const int n = sampling.num_samples;
  std::vector<Vec2> points;
  points.reserve(batch.size() * n);
  for (const auto& s : batch) render::AppendSamplePoints(s.ray, sampling, points);

  const auto logits = model.TrainLogits(points, update_running_stats);
  std::vector<double> occ(points.size());
  for (std::size_t i = 0; i < occ.size(); ++i) {
    occ[i] = field::Sigmoid(static_cast<double>(logits[i]));
  }

  BatchLoss out;
  std::vector<double> residual_sign(batch.size(), 0.0);
  double geo_sum = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    if (!batch[r].valid) continue;
    const std::span<const double> ray_occ(occ.data() + r * n, n);
    const double diff =
        render::render_samples(ray_occ, sampling).range - batch[r].true_range;
    geo_sum += std::abs(diff);
    residual_sign[r] = (diff > 0.0) - (diff < 0.0);
    ++out.valid_rays;
  }
  out.geometric = out.valid_rays > 0 ? geo_sum / out.valid_rays : 0.0;
  out.regularizer = occupancy_regularizer(occ);
  out.total = out.geometric + lambda * out.regularizer;

  if (gradients != nullptr) {
    std::vector<double> dprob(occ.size());
    for (std::size_t i = 0; i < occ.size(); ++i) {
      dprob[i] = lambda * regularizer_gradient(occ[i], occ.size());
    }
    for (std::size_t r = 0; r < batch.size(); ++r) {
      if (residual_sign[r] == 0.0) continue;
      const std::span<const double> ray_occ(occ.data() + r * n, n);
      const auto g = range_gradient(ray_occ, sampling);
      const double scale = residual_sign[r] / out.valid_rays;
      for (int k = 0; k < n; ++k) dprob[r * n + k] += scale * g[k];
    }
    *gradients = model.Backward(dprob);
  }
  return out;
}

template BatchLoss batch_loss<float>(field::FieldModelT<float>&,
                                     std::span<const TrainSample>,
                                     const render::RaySampling&, double,
                                     field::FieldTensors<float>*, bool);
template BatchLoss batch_loss<double>(field::FieldModelT<double>&,
                                      std::span<const TrainSample>,
                                      const render::RaySampling&, double,
                                      field::FieldTensors<double>*, bool);

void AppendSamples(const Pose2& pose, const LidarParams& params,
                   std::span<const double> ranges,
                   std::vector<TrainSample>& samples) {
  const auto rays = beams_of(pose, params);
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const bool valid = HasReturn(ranges[i]);
    samples.push_back({rays[i], valid ? ranges[i] : 0.0, valid});
  }
}

}  // namespace nofmcl::train
