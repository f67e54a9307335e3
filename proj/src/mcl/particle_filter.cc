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

#include "nofmcl/mcl/particle_filter.h"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"

namespace nofmcl::mcl {

using nlohmann::json;

void ObservationConfig::Validate() const {
  if (!(sigma > 0.0)) throw InputError("observation: sigma must be > 0");
  if (beam_subsample < 0) throw InputError("observation: beam_subsample must be >= 0");
  if (!(floor_likelihood >= 0.0)) {
    throw InputError("observation: floor_likelihood must be >= 0");
  }
}

std::vector<int> ObservationConfig::SelectBeams(int num_beams) const {
  std::vector<int> beams;
  if (beam_subsample == 0 || beam_subsample >= num_beams) {
    for (int i = 0; i < num_beams; ++i) beams.push_back(i);
  } else if (beam_subsample == 1) {
    beams.push_back(num_beams / 2);
  } else {
    for (int k = 0; k < beam_subsample; ++k) {
      beams.push_back(static_cast<int>(
          std::lround(static_cast<double>(k) * (num_beams - 1) / (beam_subsample - 1))));
    }
  }
  return beams;
}

void FilterConfig::Validate() const {
  if (tracking_particles < 1 || init_particles < tracking_particles) {
    throw InputError("filter: need init_particles >= tracking_particles >= 1");
  }
  if (!(convergence_spread > 0.0)) {
    throw InputError("filter: convergence_spread must be > 0");
  }
  if (!(resample_ess_fraction >= 0.0 && resample_ess_fraction <= 1.0)) {
    throw InputError("filter: resample_ess_fraction must be in [0, 1]");
  }
  if (map_bounds.degenerate()) throw InputError("filter: degenerate map bounds");
  motion.Validate();
  observation.Validate();
}

ParticleSet init_uniform(const FilterConfig& config, Rng& rng) {
  ParticleSet particles(config.init_particles);
  const double w = 1.0 / config.init_particles;
  for (auto& p : particles) {
    const double x = rng.uniform(config.map_bounds.min.x(), config.map_bounds.max.x());
    const double y = rng.uniform(config.map_bounds.min.y(), config.map_bounds.max.y());
    const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
    p = {Pose2(x, y, theta), w};
  }
  return particles;
}

void motion_update(ParticleSet& particles, const Pose2& odometry_delta,
                   const MotionNoise& noise, Rng& rng) {
  for (auto& p : particles) {
    p.pose = pose_compose(p.pose, SampleOdometry(odometry_delta, noise, rng));
  }
}

Likelihood measurement_likelihood(const LidarFrame& scan, const Pose2& pose,
                                  const ObservationConfig& obs,
                                  const render::ScanPredictor& predictor,
                                  std::span<const int> beams) {
  thread_local std::vector<double> predicted;
  predicted.resize(beams.size());
  predictor.Predict(pose, scan.params, beams, predicted);
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    const double z = scan.ranges[beams[k]];
    if (!HasReturn(z) || !HasReturn(predicted[k])) continue;
    sum += std::abs(predicted[k] - z);
    ++n;
  }
  if (n == 0) return {obs.floor_likelihood, 0, true};
  const double d = sum / n;
  return {std::exp(-d * d / (2.0 * obs.sigma * obs.sigma)), n, false};
}

Likelihood measurement_likelihood(const LidarFrame& scan, const Pose2& pose,
                                  const ObservationConfig& obs,
                                  const render::ScanPredictor& predictor) {
  const auto beams = obs.SelectBeams(scan.params.num_beams);
  return measurement_likelihood(scan, pose, obs, predictor, beams);
}

UpdateStats apply_likelihoods(ParticleSet& particles,
                              std::span<const double> likelihoods) {
  UpdateStats stats;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    particles[i].weight *= likelihoods[i];
    stats.mass += particles[i].weight;
  }
  if (!(stats.mass > 0.0) || !std::isfinite(stats.mass)) {
    stats.reset = true;
    const double w = 1.0 / particles.size();
    for (auto& p : particles) p.weight = w;
    return stats;
  }
  for (auto& p : particles) p.weight /= stats.mass;
  return stats;
}

UpdateStats measurement_update(ParticleSet& particles, const LidarFrame& scan,
                               const ObservationConfig& obs,
                               const render::ScanPredictor& predictor,
                               const std::optional<Box2>& map_bounds) {
  const auto beams = obs.SelectBeams(scan.params.num_beams);
  const int n = static_cast<int>(particles.size());
  std::vector<double> likelihoods(n);
  std::vector<char> floored(n, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (int i = 0; i < n; ++i) {
    if (map_bounds && !map_bounds->contains(particles[i].pose.translation())) {
      likelihoods[i] = 0.0;
      continue;
    }
    const auto l =
        measurement_likelihood(scan, particles[i].pose, obs, predictor, beams);
    likelihoods[i] = l.value;
    floored[i] = l.floored;
  }
  UpdateStats stats = apply_likelihoods(particles, likelihoods);
  for (char f : floored) stats.floored += f;
  return stats;
}

double effective_sample_size(const ParticleSet& particles) {
  double sum_sq = 0.0;
  for (const auto& p : particles) sum_sq += p.weight * p.weight;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

ParticleSet systematic_resample(const ParticleSet& particles, int count, Rng& rng) {
  ParticleSet out;
  out.reserve(count);
  double total = 0.0;
  for (const auto& p : particles) total += p.weight;
  const double step = total / count;
  double u = rng.uniform() * step;
  double cumulative = particles.front().weight;
  std::size_t i = 0;
  const double w = 1.0 / count;
  for (int k = 0; k < count; ++k) {
    while (u >= cumulative && i + 1 < particles.size()) {
      ++i;
      cumulative += particles[i].weight;
    }
    out.push_back({particles[i].pose, w});
    u += step;
  }
  return out;
}

bool resample(ParticleSet& particles, int target_count, double ess_fraction,
              Rng& rng) {
  const double m = static_cast<double>(particles.size());
  if (effective_sample_size(particles) < ess_fraction * m ||
      static_cast<std::size_t>(target_count) != particles.size()) {
    particles = systematic_resample(particles, target_count, rng);
    return true;
  }
  return false;
}

PoseEstimate estimate_pose(const ParticleSet& particles) {
  double total = 0.0, x = 0.0, y = 0.0, s = 0.0, c = 0.0;
  for (const auto& p : particles) {
    total += p.weight;
    x += p.weight * p.pose.x();
    y += p.weight * p.pose.y();
    s += p.weight * std::sin(p.pose.theta());
    c += p.weight * std::cos(p.pose.theta());
  }
  x /= total;
  y /= total;
  double var = 0.0;
  for (const auto& p : particles) {
    const double dx = p.pose.x() - x, dy = p.pose.y() - y;
    var += p.weight * (dx * dx + dy * dy);
  }
  return {Pose2(x, y, std::atan2(s, c)), std::sqrt(var / total)};
}

ParticleFilter::ParticleFilter(const FilterConfig& config,
                               const render::ScanPredictor& predictor)
    : config_(config), predictor_(predictor), rng_(config.rng_seed) {
  config_.Validate();
}

void ParticleFilter::Initialize() {
  particles_ = init_uniform(config_, rng_);
  convergence_time_.reset();
}

void ParticleFilter::Initialize(ParticleSet particles) {
  if (particles.empty()) throw InputError("filter: empty particle set");
  particles_ = std::move(particles);
  convergence_time_.reset();
}

StepRecord ParticleFilter::Step(const Pose2& odometry_delta, const LidarFrame& scan) {
  if (particles_.empty()) throw std::logic_error("filter: not initialized");
  const auto start = std::chrono::steady_clock::now();
  StepRecord record;
  record.timestamp = scan.timestamp;

  motion_update(particles_, odometry_delta, config_.motion, rng_);
  const UpdateStats stats =
      measurement_update(particles_, scan, config_.observation, predictor_,
                         config_.map_bounds);
  record.weight_reset = stats.reset;
  record.floored = stats.floored;
  record.ess = effective_sample_size(particles_);
  record.resampled = resample(particles_, static_cast<int>(particles_.size()),
                              config_.resample_ess_fraction, rng_);
  record.estimate = estimate_pose(particles_);
  if (!convergence_time_ && record.estimate.spread < config_.convergence_spread) {
    convergence_time_ = scan.timestamp;
    if (static_cast<int>(particles_.size()) != config_.tracking_particles) {
      resample(particles_, config_.tracking_particles, config_.resample_ess_fraction,
               rng_);
      record.resampled = true;
    }
  }
  record.converged = convergence_time_.has_value();
  record.num_particles = static_cast<int>(particles_.size());
  record.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return record;
}

std::vector<StepRecord> localize(const io::ScanLog& log, const FilterConfig& config,
                                 const render::ScanPredictor& predictor,
                                 const std::function<void(const StepRecord&)>& on_step) {
  if (log.frames.empty()) throw InputError("localize: empty scan log");
  if (!log.all_have_odometry()) {
    throw InputError("localize: every frame needs an odometry delta");
  }
  ParticleFilter filter(config, predictor);
  filter.Initialize();
  std::vector<StepRecord> records;
  for (std::size_t i = 0; i < log.frames.size(); ++i) {
    records.push_back(filter.Step(*log.frames[i].odometry, log.lidar_frame(i)));
    if (on_step) on_step(records.back());
  }
  return records;
}

std::string SerializeLocalization(const std::vector<StepRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    const Pose2& p = r.estimate.pose;
    json line = {{"t", r.timestamp},
                 {"pose", {p.x(), p.y(), p.theta()}},
                 {"spread", r.estimate.spread},
                 {"ess", r.ess},
                 {"converged", r.converged},
                 {"particles", r.num_particles},
                 {"resampled", r.resampled},
                 {"weight_reset", r.weight_reset},
                 {"floored", r.floored},
                 {"seconds", r.seconds}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<StepRecord> ParseLocalization(const std::string& text) {
  std::vector<StepRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      StepRecord r;
      r.timestamp = j.at("t").get<double>();
      const auto p = j.at("pose").get<std::vector<double>>();
      if (p.size() != 3) throw InputError("pose needs 3 numbers");
      r.estimate.pose = Pose2(p[0], p[1], p[2]);
      r.estimate.spread = j.at("spread").get<double>();
      r.ess = j.at("ess").get<double>();
      r.converged = j.at("converged").get<bool>();
      r.num_particles = j.at("particles").get<int>();
      r.resampled = j.value("resampled", false);
      r.weight_reset = j.value("weight_reset", false);
      r.floored = j.value("floored", 0);
      r.seconds = j.value("seconds", 0.0);
      out.push_back(r);
    } catch (const json::exception& e) {
      throw InputError("localization log: line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return out;
}

void WriteLocalization(const std::vector<StepRecord>& records,
                       const std::filesystem::path& path) {
  io::WriteFileAtomic(path, SerializeLocalization(records));
}

}  // namespace nofmcl::mcl
