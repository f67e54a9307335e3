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

#include "nofmcl/eval/metrics.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "nofmcl/core/error.h"

namespace nofmcl::eval {
namespace {

// Threshold comparisons absorb the rounding of differences of poses.
constexpr double kSlack = 1e-9;

double RadToDeg(double r) { return r * 180.0 / std::numbers::pi; }

std::vector<Vec2> PointCloud(const LidarFrame& frame, const Pose2& pose) {
  std::vector<Vec2> points;
  const auto rays = beams_of(pose, frame.params);
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (HasReturn(frame.ranges[i])) points.push_back(rays[i].at(frame.ranges[i]));
  }
  return points;
}

// Distance from each point of `a` to its nearest neighbour in `b`.
std::vector<double> NearestDistances(const std::vector<Vec2>& a,
                                     const std::vector<Vec2>& b) {
  std::vector<double> out(a.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : b) best = std::min(best, (a[i] - q).squaredNorm());
    out[i] = std::sqrt(best);
  }
  return out;
}

}  // namespace

std::optional<std::size_t> nearest_in_time(const std::vector<TimedPose>& truth,
                                           double t, double max_gap) {
  if (truth.empty()) return std::nullopt;
  const auto it = std::lower_bound(
      truth.begin(), truth.end(), t,
      [](const TimedPose& p, double value) { return p.timestamp < value; });
  std::size_t best;
  if (it == truth.begin()) {
    best = 0;
  } else if (it == truth.end()) {
    best = truth.size() - 1;
  } else {
    const std::size_t hi = it - truth.begin();
    best = (t - truth[hi - 1].timestamp <= truth[hi].timestamp - t) ? hi - 1 : hi;
  }
  if (std::abs(truth[best].timestamp - t) > max_gap + kSlack) return std::nullopt;
  return best;
}

LocalizationReport ape_report(const std::vector<TimedPose>& estimates,
                              const std::vector<TimedPose>& truth,
                              const ApeOptions& options,
                              std::optional<double> convergence_time) {
  LocalizationReport report;
  report.convergence_time = convergence_time;
  if (estimates.empty()) throw InputError("ape: no estimates");
  const double start = estimates.front().timestamp + options.init_window;
  std::vector<double> loc, yaw;
  for (const auto& e : estimates) {
    if (e.timestamp < start) continue;
    const auto j = nearest_in_time(truth, e.timestamp, options.max_gap);
    if (!j) {
      ++report.unmatched;
      continue;
    }
    loc.push_back((e.pose.translation() - truth[*j].pose.translation()).norm());
    yaw.push_back(std::abs(WrapAngle(e.pose.theta() - truth[*j].pose.theta())));
  }
  report.matched = static_cast<int>(loc.size());
  if (loc.empty()) throw InputError("ape: no estimate pairs after the init window");

  double sum_loc = 0.0, sum_yaw = 0.0;
  for (std::size_t i = 0; i < loc.size(); ++i) {
    sum_loc += loc[i] * loc[i];
    sum_yaw += yaw[i] * yaw[i];
  }
  report.location_rmse_cm = 100.0 * std::sqrt(sum_loc / loc.size());
  report.yaw_rmse_deg = RadToDeg(std::sqrt(sum_yaw / yaw.size()));
  for (std::size_t k = 0; k < 3; ++k) {
    const double loc_thr = kLocationThresholdsCm[k] / 100.0 + kSlack;
    const double yaw_thr = kYawThresholdsDeg[k] * std::numbers::pi / 180.0 + kSlack;
    const auto n_loc = std::count_if(loc.begin(), loc.end(),
                                     [&](double e) { return e <= loc_thr; });
    const auto n_yaw = std::count_if(yaw.begin(), yaw.end(),
                                     [&](double e) { return e <= yaw_thr; });
    report.pct_location[k] = 100.0 * n_loc / loc.size();
    report.pct_yaw[k] = 100.0 * n_yaw / yaw.size();
  }
  report.converged = report.location_rmse_cm <= kFailLocationCm &&
                     report.yaw_rmse_deg <= kFailYawDeg;
  return report;
}

ScanQualityReport scan_quality(const LidarFrame& rendered, const LidarFrame& truth,
                               const Pose2& pose, double threshold) {
  if (rendered.ranges.size() != truth.ranges.size()) {
    throw InputError("scan quality: scans have different beam counts");
  }
  ScanQualityReport report;
  double sum = 0.0;
  int accurate = 0;
  for (std::size_t i = 0; i < truth.ranges.size(); ++i) {
    if (!HasReturn(truth.ranges[i]) || !HasReturn(rendered.ranges[i])) continue;
    const double e = std::abs(rendered.ranges[i] - truth.ranges[i]);
    sum += e;
    accurate += e < threshold;
    ++report.beams;
  }
  if (report.beams == 0) throw InputError("scan quality: no mutually valid beams");
  report.avg_abs_error = sum / report.beams;
  report.acc = 100.0 * accurate / report.beams;

  const auto a = PointCloud(rendered, pose);
  const auto b = PointCloud(truth, pose);
  const auto ab = NearestDistances(a, b);
  const auto ba = NearestDistances(b, a);
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
  };
  report.chamfer = 0.5 * (mean(ab) + mean(ba));
  auto within = [&](const std::vector<double>& v) {
    return static_cast<double>(std::count_if(
               v.begin(), v.end(), [&](double d) { return d <= threshold + kSlack; })) /
           v.size();
  };
  const double precision = within(ab);
  const double recall = within(ba);
  report.f_score = precision + recall > 0.0
                       ? 2.0 * precision * recall / (precision + recall)
                       : 0.0;
  return report;
}

void ScanQualityAccumulator::Add(const ScanQualityReport& r) {
  error_sum += r.avg_abs_error * r.beams;
  accurate += static_cast<int>(std::lround(r.acc * r.beams / 100.0));
  beams += r.beams;
  chamfer_sum += r.chamfer;
  f_sum += r.f_score;
  ++scans;
}

ScanQualityReport ScanQualityAccumulator::Mean() const {
  ScanQualityReport r;
  if (scans == 0 || beams == 0) return r;
  r.avg_abs_error = error_sum / beams;
  r.acc = 100.0 * accurate / beams;
  r.chamfer = chamfer_sum / scans;
  r.f_score = f_sum / scans;
  r.beams = beams;
  return r;
}

std::vector<std::pair<double, double>> convergence_curve(
    const std::vector<TimedPose>& estimates, const std::vector<TimedPose>& truth,
    double max_gap) {
  std::vector<std::pair<double, double>> series;
  series.reserve(estimates.size());
  for (const auto& e : estimates) {
    const auto j = nearest_in_time(truth, e.timestamp, max_gap);
    series.emplace_back(
        e.timestamp,
        j ? (e.pose.translation() - truth[*j].pose.translation()).norm()
          : std::numeric_limits<double>::quiet_NaN());
  }
  return series;
}

std::vector<TimedPose> EstimatesOf(const std::vector<mcl::StepRecord>& records) {
  std::vector<TimedPose> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.timestamp, r.estimate.pose});
  return out;
}

std::vector<TimedPose> TruthOf(const io::ScanLog& log) {
  std::vector<TimedPose> out;
  for (const auto& f : log.frames) {
    if (f.pose) out.push_back({f.timestamp, *f.pose});
  }
  return out;
}

std::vector<BenchRow> throughput_bench(const io::ScanLog& log,
                                       const std::vector<BenchVariant>& variants,
                                       const std::vector<int>& particle_counts,
                                       const mcl::FilterConfig& base, int steps) {
  if (log.frames.empty()) throw InputError("bench: empty scan log");
  steps = std::max(1, std::min<int>(steps, static_cast<int>(log.frames.size())));
  std::vector<BenchRow> rows;
  for (const auto& v : variants) {
    for (int count : particle_counts) {
      mcl::FilterConfig config = base;
      config.init_particles = count;
      config.tracking_particles = count;
      mcl::ParticleFilter filter(config, *v.predictor);
      filter.Initialize();
      const auto start = std::chrono::steady_clock::now();
      for (int i = 0; i < steps; ++i) {
        const auto& f = log.frames[i];
        filter.Step(f.odometry.value_or(Pose2::Identity()), log.lidar_frame(i));
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count() /
          steps;
      rows.push_back({v.name, count, seconds, 1.0 / seconds, 1e6 * seconds / count});
    }
  }
  return rows;
}

std::string FormatReport(const LocalizationReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "location_rmse_cm  %.3f\n"
                "yaw_rmse_deg      %.3f\n"
                "pct_within_5cm    %.1f\n"
                "pct_within_10cm   %.1f\n"
                "pct_within_20cm   %.1f\n"
                "pct_within_0.5deg %.1f\n"
                "pct_within_1deg   %.1f\n"
                "pct_within_2deg   %.1f\n"
                "converged         %s\n"
                "convergence_time  %s\n"
                "matched           %d\n"
                "unmatched         %d\n",
                r.location_rmse_cm, r.yaw_rmse_deg, r.pct_location[0],
                r.pct_location[1], r.pct_location[2], r.pct_yaw[0], r.pct_yaw[1],
                r.pct_yaw[2], r.converged ? "yes" : "no",
                r.convergence_time ? std::to_string(*r.convergence_time).c_str() : "-",
                r.matched, r.unmatched);
  return buf;
}

std::string FormatReport(const ScanQualityReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "avg_abs_error_m  %.4f\n"
                "acc_pct          %.2f\n"
                "chamfer_m        %.4f\n"
                "f_score          %.4f\n"
                "beams            %d\n",
                r.avg_abs_error, r.acc, r.chamfer, r.f_score, r.beams);
  return buf;
}

std::string FormatBench(const std::vector<BenchRow>& rows) {
  std::string out = "variant          particles  s/step      Hz        us/particle\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-16s %9d  %-10.4f  %-8.3f  %.3f\n",
                  r.variant.c_str(), r.particles, r.seconds_per_step, r.hz,
                  r.microseconds_per_particle);
    out += buf;
  }
  return out;
}

std::string SeriesCsv(const std::vector<std::pair<double, double>>& series,
                      const std::string& x_name, const std::string& y_name) {
  std::string out = x_name + "," + y_name + "\n";
  char buf[64];
  for (const auto& [x, y] : series) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", x, y);
    out += buf;
  }
  return out;
}

}  // namespace nofmcl::eval
