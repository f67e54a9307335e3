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

#ifndef NOFMCL_RENDER_SCAN_PREDICTOR_H_
#define NOFMCL_RENDER_SCAN_PREDICTOR_H_

#include <span>

#include "nofmcl/core/lidar.h"
#include "nofmcl/render/occupancy_source.h"
#include "nofmcl/render/volume_render.h"

namespace nofmcl::render {

// Produces the expected range of selected beams for a hypothesized pose.
// This is the map side of the filter's observation model: the volume
// renderer, the exact simulator and the grid ray caster all implement it.
// Implementations are read-only and safe for concurrent calls.
class ScanPredictor {
 public:
  virtual ~ScanPredictor() = default;

  // ranges[k] receives the predicted range of beam beams[k], or kNoReturn.
  virtual void Predict(const Pose2& pose, const LidarParams& params,
                       std::span<const int> beams,
                       std::span<double> ranges) const = 0;
};

// Volume rendering against any occupancy source. Beams whose escape mass
// exceeds `escape_threshold` are reported as kNoReturn.
class VolumeScanPredictor : public ScanPredictor {
 public:
  VolumeScanPredictor(const OccupancySource& source, RaySampling sampling,
                      double escape_threshold = kEscapeThreshold)
      : source_(source), sampling_(sampling), escape_threshold_(escape_threshold) {}

  void Predict(const Pose2& pose, const LidarParams& params,
               std::span<const int> beams,
               std::span<double> ranges) const override;

  const RaySampling& sampling() const { return sampling_; }

 private:
  const OccupancySource& source_;
  RaySampling sampling_;
  double escape_threshold_;
};

}  // namespace nofmcl::render

#endif  // NOFMCL_RENDER_SCAN_PREDICTOR_H_
