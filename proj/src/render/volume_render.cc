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

#include "nofmcl/render/volume_render.h"

#include <cmath>

#include "nofmcl/core/error.h"

namespace nofmcl::render {

void FieldSource::Query(std::span<const Vec2> points,
                        std::span<double> probabilities) const {
  if (points.empty()) return;
  const auto p = field::occupancy_batch(model_, points);
  std::copy(p.begin(), p.end(), probabilities.begin());
}

void RaySampling::Validate() const {
  if (num_samples < 1) throw InputError("sampling: num_samples must be >= 1");
  if (!(t_min >= 0.0) || !(t_min < t_max) || !std::isfinite(t_max)) {
    throw InputError("sampling: need 0 <= t_min < t_max");
  }
}

double termination_weights(std::span<const double> occupancy,
                           std::span<double> alpha) {
  double transmittance = 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    alpha[i] = occupancy[i] * transmittance;
    total += alpha[i];
    transmittance *= 1.0 - occupancy[i];
  }
  return total;
}

std::vector<double> termination_weights(std::span<const double> occupancy) {
  std::vector<double> alpha(occupancy.size());
  termination_weights(occupancy, alpha);
  return alpha;
}

RangeEstimate render_samples(std::span<const double> occupancy,
                             const RaySampling& sampling) {
  double transmittance = 1.0;
  double range = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    const double alpha = occupancy[i] * transmittance;
    range += alpha * sampling.distance(static_cast<int>(i));
    mass += alpha;
    transmittance *= 1.0 - occupancy[i];
  }
  return {range, 1.0 - mass};
}

void AppendSamplePoints(const Ray& ray, const RaySampling& sampling,
                        std::vector<Vec2>& points) {
  for (int i = 0; i < sampling.num_samples; ++i) {
    points.push_back(ray.at(sampling.distance(i)));
  }
}

RangeEstimate render_range(const OccupancySource& source, const Ray& ray,
                           const RaySampling& sampling) {
  std::vector<Vec2> points;
  points.reserve(sampling.num_samples);
  AppendSamplePoints(ray, sampling, points);
  std::vector<double> occ(points.size());
  source.Query(points, occ);
  return render_samples(occ, sampling);
}

LidarFrame RenderedScan::Masked(double max_escape) const {
  LidarFrame out = frame;
  for (std::size_t i = 0; i < out.ranges.size(); ++i) {
    if (escape_mass[i] > max_escape) out.ranges[i] = kNoReturn;
  }
  return out;
}

RenderedScan render_scan(const OccupancySource& source, const Pose2& pose,
                         const LidarParams& params, const RaySampling& sampling) {
  const int n = sampling.num_samples;
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(n) * params.num_beams);
  for (const Ray& ray : beams_of(pose, params)) {
    AppendSamplePoints(ray, sampling, points);
  }
  std::vector<double> occ(points.size());
  source.Query(points, occ);

  RenderedScan scan;
  scan.frame.params = params;
  scan.frame.ranges.resize(params.num_beams);
  scan.escape_mass.resize(params.num_beams);
  for (int b = 0; b < params.num_beams; ++b) {
    const auto est = render_samples(
        std::span<const double>(occ).subspan(static_cast<std::size_t>(b) * n, n),
        sampling);
    scan.frame.ranges[b] = est.range;
    scan.escape_mass[b] = est.escape_mass;
  }
  return scan;
}

}  // namespace nofmcl::render
