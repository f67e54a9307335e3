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

#ifndef NOFMCL_TRAIN_LOSS_H_
#define NOFMCL_TRAIN_LOSS_H_

#include <span>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/field/field_model.h"
#include "nofmcl/render/volume_render.h"

namespace nofmcl::train {

// Occupancies are clamped to [kOccClamp, 1 - kOccClamp] before the logs of
// the regularizer.
inline constexpr double kOccClamp = 1e-7;

struct TrainSample {
  Ray ray;
  double true_range = 0.0;
  // False for no-return beams; they add to the regularizer only.
  bool valid = false;
};

// Mean of |rendered - truth| over valid beams; 0 without valid beams.
double geometric_loss(std::span<const double> rendered,
                      std::span<const double> truth,
                      const std::vector<bool>& valid);

// Mean of log(p) + log(1 - p) over all values, with p clamped first.
double occupancy_regularizer(std::span<const double> occupancy);

// d(rendered range)/d(occ_k) for one ray:
//   T_k * (m_k - S_k),  S_k = o_{k+1} m_{k+1} + (1 - o_{k+1}) S_{k+1},
// where T_k = prod_{j<k} (1 - o_j) and S_{N-1} = 0.
std::vector<double> range_gradient(std::span<const double> occupancy,
                                   const render::RaySampling& sampling);

// Gradient of occupancy_regularizer w.r.t. each value, for a mean taken
// over `count` values. Zero inside the clamped region.
double regularizer_gradient(double p, std::size_t count);

struct BatchLoss {
  double geometric = 0.0;
  double regularizer = 0.0;
  double total = 0.0;
  int valid_rays = 0;
};

// Training-mode forward pass over every sample point of the batch,
// rendering and L = L_geo + lambda * L_reg. With `gradients` set, also
// back-propagates through the renderer and the network.
template <typename Scalar>
BatchLoss batch_loss(field::FieldModelT<Scalar>& model,
                     std::span<const TrainSample> batch,
                     const render::RaySampling& sampling, double lambda,
                     field::FieldTensors<Scalar>* gradients,
                     bool update_running_stats = true);

// Builds one sample per beam of a posed frame.
void AppendSamples(const Pose2& pose, const LidarParams& params,
                   std::span<const double> ranges,
                   std::vector<TrainSample>& samples);

}  // namespace nofmcl::train

#endif  // NOFMCL_TRAIN_LOSS_H_
