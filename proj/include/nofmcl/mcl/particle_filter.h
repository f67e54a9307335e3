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

#ifndef NOFMCL_MCL_PARTICLE_FILTER_H_
#define NOFMCL_MCL_PARTICLE_FILTER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/core/rng.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/mcl/motion_model.h"
#include "nofmcl/render/scan_predictor.h"

namespace nofmcl::mcl {

struct Particle {
  Pose2 pose;
  double weight = 0.0;
};

using ParticleSet = std::vector<Particle>;

struct ObservationConfig {
  double sigma = 0.25;  // metres
  // Number of evenly spaced beams compared per particle (0: all).
  int beam_subsample = 0;
  // Returned when a particle shares no valid beam with the scan.
  double floor_likelihood = 1e-12;

  void Validate() const;
  // Indices of the beams used for a scan of num_beams beams.
  std::vector<int> SelectBeams(int num_beams) const;
};

struct FilterConfig {
  int init_particles = 100000;
  int tracking_particles = 5000;
  double convergence_spread = 0.5;  // metres
  double resample_ess_fraction = 0.5;
  uint64_t rng_seed = 0;
  Box2 map_bounds;
  MotionNoise motion;
  ObservationConfig observation;

  void Validate() const;
};

ParticleSet init_uniform(const FilterConfig& config, Rng& rng);

// Each particle moves by its own noisy draw of the odometry delta.
void motion_update(ParticleSet& particles, const Pose2& odometry_delta,
                   const MotionNoise& noise, Rng& rng);

struct Likelihood {
  double value = 0.0;
  int used_beams = 0;
  bool floored = false;
};

// exp(-D^2 / (2 sigma^2)) with D the mean |predicted - measured| over the
// selected beams that are valid in both scans.
Likelihood measurement_likelihood(const LidarFrame& scan, const Pose2& pose,
                                  const ObservationConfig& obs,
                                  const render::ScanPredictor& predictor,
                                  std::span<const int> beams);
Likelihood measurement_likelihood(const LidarFrame& scan, const Pose2& pose,
                                  const ObservationConfig& obs,
                                  const render::ScanPredictor& predictor);

struct UpdateStats {
  // Total weight before normalization.
  double mass = 0.0;
  // True when the mass underflowed and weights were reset to uniform.
  bool reset = false;
  int floored = 0;
};

// w_i <- w_i * l_i, then normalized.
UpdateStats apply_likelihoods(ParticleSet& particles,
                              std::span<const double> likelihoods);

// Likelihoods are evaluated in parallel into fixed slots, so the result
// does not depend on the thread count. Particles outside `map_bounds` (when
// given) get likelihood 0.
UpdateStats measurement_update(ParticleSet& particles, const LidarFrame& scan,
                               const ObservationConfig& obs,
                               const render::ScanPredictor& predictor,
                               const std::optional<Box2>& map_bounds = std::nullopt);

double effective_sample_size(const ParticleSet& particles);

// Low-variance resampling to `count` particles with uniform weights.
ParticleSet systematic_resample(const ParticleSet& particles, int count, Rng& rng);

// Resamples when ESS < ess_fraction * M. Otherwise the set is kept, except
// that a change of size is done by one systematic pass. Returns true when
// the set was redrawn.
bool resample(ParticleSet& particles, int target_count, double ess_fraction,
              Rng& rng);

struct PoseEstimate {
  Pose2 pose;
  // Weighted RMS distance of the particle positions from the mean.
  double spread = 0.0;
};

// Weighted mean position and circular-mean heading.
PoseEstimate estimate_pose(const ParticleSet& particles);

struct StepRecord {
  double timestamp = 0.0;
  PoseEstimate estimate;
  double ess = 0.0;
  bool converged = false;
  bool resampled = false;
  bool weight_reset = false;
  int num_particles = 0;
  int floored = 0;
  // Wall time of the step; the only field that varies between runs with
  // the same seed.
  double seconds = 0.0;
};

class ParticleFilter {
 public:
  // `predictor` must outlive the filter.
  ParticleFilter(const FilterConfig& config, const render::ScanPredictor& predictor);

  // Draws init_particles uniform particles.
  void Initialize();
  void Initialize(ParticleSet particles);

  // motion -> measurement -> conditional resample -> estimate. The first
  // time the spread falls below convergence_spread the set shrinks to
  // tracking_particles and the timestamp is recorded.
  StepRecord Step(const Pose2& odometry_delta, const LidarFrame& scan);

  const ParticleSet& particles() const { return particles_; }
  bool converged() const { return convergence_time_.has_value(); }
  std::optional<double> convergence_time() const { return convergence_time_; }
  const FilterConfig& config() const { return config_; }

 private:
  FilterConfig config_;
  const render::ScanPredictor& predictor_;
  Rng rng_;
  ParticleSet particles_;
  std::optional<double> convergence_time_;
};

// Runs the filter over a log whose frames all carry odometry.
std::vector<StepRecord> localize(const io::ScanLog& log, const FilterConfig& config,
                                 const render::ScanPredictor& predictor,
                                 const std::function<void(const StepRecord&)>& on_step = {});

// One JSON object per frame.
std::string SerializeLocalization(const std::vector<StepRecord>& records);
std::vector<StepRecord> ParseLocalization(const std::string& text);
void WriteLocalization(const std::vector<StepRecord>& records,
                       const std::filesystem::path& path);

}  // namespace nofmcl::mcl

#endif  // NOFMCL_MCL_PARTICLE_FILTER_H_
