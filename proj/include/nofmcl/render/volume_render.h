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

#ifndef NOFMCL_RENDER_VOLUME_RENDER_H_
#define NOFMCL_RENDER_VOLUME_RENDER_H_

#include <span>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/render/occupancy_source.h"

namespace nofmcl::render {

// Beams whose termination weights leave more than this much mass unused are
// treated as no-return by consumers (training, filtering, the CLI).
inline constexpr double kEscapeThreshold = 0.99;

// N samples at cell centres of [t_min, t_max]:
//   m_i = t_min + (i + 0.5) * (t_max - t_min) / N.
struct RaySampling {
  int num_samples = 256;
  double t_min = 0.0;
  double t_max = 30.0;

  static RaySampling ForLidar(const LidarParams& params, int num_samples) {
    return {num_samples, params.range_min, params.range_max};
  }

  double step() const { return (t_max - t_min) / num_samples; }
  double distance(int i) const { return t_min + (i + 0.5) * step(); }

  void Validate() const;
  bool operator==(const RaySampling&) const = default;
};

// alpha_i = occ_i * prod_{j<i} (1 - occ_j). Returns sum(alpha).
double termination_weights(std::span<const double> occupancy,
                           std::span<double> alpha);
std::vector<double> termination_weights(std::span<const double> occupancy);

struct RangeEstimate {
  // sum_i alpha_i * m_i, without renormalization.
  double range = 0.0;
  // 1 - sum_i alpha_i.
  double escape_mass = 1.0;
};

// Renders from occupancy values already sampled at sampling.distance(i).
RangeEstimate render_samples(std::span<const double> occupancy,
                             const RaySampling& sampling);

RangeEstimate render_range(const OccupancySource& source, const Ray& ray,
                           const RaySampling& sampling);

struct RenderedScan {
  // Literal expected ranges, one per beam (never kNoReturn).
  LidarFrame frame;
  std::vector<double> escape_mass;

  // The frame with every beam whose escape mass exceeds `max_escape`
  // replaced by kNoReturn.
  LidarFrame Masked(double max_escape = kEscapeThreshold) const;
};

// All N * B sample points go to the source in a single query.
RenderedScan render_scan(const OccupancySource& source, const Pose2& pose,
                         const LidarParams& params, const RaySampling& sampling);

// Appends the sample points of `ray` to `points`.
void AppendSamplePoints(const Ray& ray, const RaySampling& sampling,
                        std::vector<Vec2>& points);

}  // namespace nofmcl::render

#endif  // NOFMCL_RENDER_VOLUME_RENDER_H_
