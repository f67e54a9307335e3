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

#include "nofmcl/render/scan_predictor.h"

#include <vector>

namespace nofmcl::render {

void VolumeScanPredictor::Predict(const Pose2& pose, const LidarParams& params,
                                  std::span<const int> beams,
                                  std::span<double> ranges) const {
  const int n = sampling_.num_samples;
  std::vector<Vec2> points;
  points.reserve(beams.size() * n);
  for (int b : beams) {
    AppendSamplePoints(beam_ray(pose, params, b), sampling_, points);
  }
  std::vector<double> occ(points.size());
  source_.Query(points, occ);
  for (std::size_t k = 0; k < beams.size(); ++k) {
    const auto est = render_samples(
        std::span<const double>(occ).subspan(k * n, n), sampling_);
    ranges[k] = est.escape_mass > escape_threshold_ ? kNoReturn : est.range;
  }
}

}  // namespace nofmcl::render
