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

#ifndef NOFMCL_EVAL_METRICS_H_
#define NOFMCL_EVAL_METRICS_H_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/core/pose2.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/mcl/particle_filter.h"

namespace nofmcl::eval {

inline constexpr std::array<double, 3> kLocationThresholdsCm = {5.0, 10.0, 20.0};
inline constexpr std::array<double, 3> kYawThresholdsDeg = {0.5, 1.0, 2.0};
inline constexpr double kFailLocationCm = 50.0;
inline constexpr double kFailYawDeg = 5.0;

struct ApeOptions {
  // Seconds after the first estimate that are left out.
  double init_window = 20.0;
  // Estimates without truth this close in time are dropped.
  double max_gap = 0.1;
};

struct LocalizationReport {
  double location_rmse_cm = 0.0;
  double yaw_rmse_deg = 0.0;
  // Inclusive: error <= threshold.
  std::array<double, 3> pct_location{};
  std::array<double, 3> pct_yaw{};
  // False when either RMSE exceeds the failure gate.
  bool converged = false;
  std::optional<double> convergence_time;
  int matched = 0;
  int unmatched = 0;
};

// Index of the truth sample nearest in time to t (earlier on ties), or
// nullopt if it is further than max_gap. `truth` must be sorted by time.
std::optional<std::size_t> nearest_in_time(const std::vector<TimedPose>& truth,
                                           double t, double max_gap);

// Throws InputError if no estimate survives the window and pairing.
LocalizationReport ape_report(const std::vector<TimedPose>& estimates,
                              const std::vector<TimedPose>& truth,
                              const ApeOptions& options = {},
                              std::optional<double> convergence_time = std::nullopt);

struct ScanQualityReport {
  double avg_abs_error = 0.0;  // metres
  double acc = 0.0;            // percent of beams with error < threshold
  double chamfer = 0.0;        // metres
  double f_score = 0.0;
  int beams = 0;
};

// Errors over mutually valid beams. Each scan becomes the point cloud of
// its own valid beams; chamfer averages the two directed mean
// nearest-neighbour distances and the F-score counts matches within the
// threshold (inclusive). Throws InputError without mutually valid beams.
ScanQualityReport scan_quality(const LidarFrame& rendered, const LidarFrame& truth,
                               const Pose2& pose, double threshold = 0.5);

// Beam-weighted aggregate over many scans: avg error and Acc pool all
// beams, chamfer and F are averaged per scan.
struct ScanQualityAccumulator {
  double error_sum = 0.0;
  int accurate = 0;
  int beams = 0;
  double chamfer_sum = 0.0;
  double f_sum = 0.0;
  int scans = 0;

  void Add(const ScanQualityReport& report);
  ScanQualityReport Mean() const;
};

// Per-estimate position error against the nearest-time truth (NaN when
// unmatched).
std::vector<std::pair<double, double>> convergence_curve(
    const std::vector<TimedPose>& estimates, const std::vector<TimedPose>& truth,
    double max_gap = 0.1);

std::vector<TimedPose> EstimatesOf(const std::vector<mcl::StepRecord>& records);
std::vector<TimedPose> TruthOf(const io::ScanLog& log);

struct BenchVariant {
  std::string name;
  const render::ScanPredictor* predictor = nullptr;
};

struct BenchRow {
  std::string variant;
  int particles = 0;
  double seconds_per_step = 0.0;
  double hz = 0.0;
  double microseconds_per_particle = 0.0;
};

// Times full filter steps over the first `steps` frames of `log` for
// every variant and particle count.
std::vector<BenchRow> throughput_bench(const io::ScanLog& log,
                                       const std::vector<BenchVariant>& variants,
                                       const std::vector<int>& particle_counts,
                                       const mcl::FilterConfig& base, int steps = 3);

std::string FormatReport(const LocalizationReport& report);
std::string FormatReport(const ScanQualityReport& report);
std::string FormatBench(const std::vector<BenchRow>& rows);
std::string SeriesCsv(const std::vector<std::pair<double, double>>& series,
                      const std::string& x_name, const std::string& y_name);

}  // namespace nofmcl::eval

#endif  // NOFMCL_EVAL_METRICS_H_
