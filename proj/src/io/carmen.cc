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

#include "nofmcl/io/carmen.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"

namespace nofmcl::io {
namespace {

std::vector<std::string> Tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool ToDouble(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

LidarParams CarmenLidarParams(int num_beams, double range_max) {
  LidarParams p;
  p.num_beams = num_beams;
  p.angle_min = -std::numbers::pi / 2.0;
  p.angle_max = p.angle_min + (num_beams - 1) * std::numbers::pi / num_beams;
  p.range_min = 0.0;
  p.range_max = range_max;
  return p;
}

CarmenLog ParseCarmen(const std::string& text, const CarmenOptions& options) {
  CarmenLog out;
  auto& report = out.report;
  std::optional<LidarParams> params = options.lidar;
  std::optional<Pose2> last_odom;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = Tokens(line);
    if (tok.empty() || tok[0][0] == '#' || (tok[0] != "FLASER" && tok[0] != "ODOM")) {
      ++report.ignored_lines;
      continue;
    }
    std::vector<double> v;
    bool numeric = true;
    if (tok[0] == "ODOM") {
      // ODOM x y theta tv rv accel t host t_log
      for (std::size_t i = 1; i < tok.size() && i <= 7; ++i) {
        double d;
        numeric = numeric && ToDouble(tok[i], d);
      }
      if (tok.size() < 10 || !numeric) {
        ++report.skipped_lines;
      } else {
        ++report.odom_lines;
      }
      continue;
    }
    double count_d;
    if (tok.size() < 2 || !ToDouble(tok[1], count_d) || count_d < 1 ||
        count_d != std::floor(count_d)) {
      ++report.skipped_lines;
      continue;
    }
    const int n = static_cast<int>(count_d);
    // n ranges, 6 pose values, timestamp, host, logger timestamp.
    if (static_cast<int>(tok.size()) != 2 + n + 9) {
      ++report.skipped_lines;
      continue;
    }
    for (int i = 0; i < n + 7; ++i) {
      double d = 0.0;
      if (!ToDouble(tok[2 + i], d)) {
        numeric = false;
        break;
      }
      v.push_back(d);
    }
    double logger_t;
    if (!numeric || !ToDouble(tok[2 + n + 8], logger_t)) {
      ++report.skipped_lines;
      continue;
    }
    if (!params) params = CarmenLidarParams(n, options.default_range_max);
    if (params->num_beams != n) {
      ++report.skipped_lines;
      continue;
    }
    LogFrame frame;
    frame.timestamp = v[n + 6];
    frame.pose = Pose2(v[n], v[n + 1], v[n + 2]);
    const Pose2 odom(v[n + 3], v[n + 4], v[n + 5]);
    frame.odometry = last_odom ? pose_between(*last_odom, odom) : Pose2::Identity();
    last_odom = odom;
    frame.ranges.resize(n);
    for (int i = 0; i < n; ++i) {
      const double r = v[i];
      frame.ranges[i] =
          (r > params->range_min && r < params->range_max) ? r : kNoReturn;
    }
    out.log.frames.push_back(std::move(frame));
    ++report.flaser_lines;
  }
  if (out.log.frames.empty()) throw InputError("carmen: no valid FLASER lines");
  out.log.params = *params;
  out.log.Validate();
  return out;
}

CarmenLog ReadCarmen(const std::filesystem::path& path, const CarmenOptions& options) {
  return ParseCarmen(ReadFileText(path), options);
}

}  // namespace nofmcl::io
