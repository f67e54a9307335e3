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

#include "nofmcl/io/scan_log.h"

#include <cmath>
#include <sstream>

#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"

namespace nofmcl::io {

using nlohmann::json;

bool ScanLog::all_posed() const {
  for (const auto& f : frames) {
    if (!f.pose) return false;
  }
  return true;
}

bool ScanLog::all_have_odometry() const {
  for (const auto& f : frames) {
    if (!f.odometry) return false;
  }
  return true;
}

void ScanLog::Validate() const {
  params.Validate();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (static_cast<int>(f.ranges.size()) != params.num_beams) {
      throw InputError("scan log: frame " + std::to_string(i) + " has " +
                       std::to_string(f.ranges.size()) + " ranges, expected " +
                       std::to_string(params.num_beams));
    }
    for (double r : f.ranges) {
      if (HasReturn(r) && !params.InRange(r)) {
        throw InputError("scan log: frame " + std::to_string(i) +
                         " has a range outside [range_min, range_max]");
      }
    }
  }
}

json LidarParamsToJson(const LidarParams& p) {
  return {{"num_beams", p.num_beams},   {"angle_min", p.angle_min},
          {"angle_max", p.angle_max},   {"range_min", p.range_min},
          {"range_max", p.range_max},   {"mount", PoseToJson(p.mount)}};
}

LidarParams LidarParamsFromJson(const json& j) {
  LidarParams p;
  p.num_beams = j.at("num_beams").get<int>();
  p.angle_min = j.at("angle_min").get<double>();
  p.angle_max = j.at("angle_max").get<double>();
  p.range_min = j.at("range_min").get<double>();
  p.range_max = j.at("range_max").get<double>();
  if (j.contains("mount")) p.mount = PoseFromJson(j.at("mount"));
  p.Validate();
  return p;
}

json PoseToJson(const Pose2& pose) {
  return json::array({pose.x(), pose.y(), pose.theta()});
}

Pose2 PoseFromJson(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw InputError("pose must be a 3-element array [x, y, theta]");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string SerializeScanLog(const ScanLog& log) {
  std::string out;
  json header = {{"format", kScanLogFormat},
                 {"version", kScanLogVersion},
                 {"frames", log.frames.size()},
                 {"lidar", LidarParamsToJson(log.params)}};
  out += header.dump();
  out += '\n';
  for (const auto& f : log.frames) {
    json ranges = json::array();
    for (double r : f.ranges) {
      ranges.push_back(HasReturn(r) ? json(r) : json(nullptr));
    }
    json line = {{"t", f.timestamp},
                 {"pose", f.pose ? PoseToJson(*f.pose) : json(nullptr)},
                 {"odom", f.odometry ? PoseToJson(*f.odometry) : json(nullptr)},
                 {"ranges", std::move(ranges)}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

ScanLog ParseScanLog(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  ScanLog log;
  std::size_t expected = 0;
  std::size_t line_no = 0;
  try {
    if (!std::getline(in, line)) throw InputError("scan log: empty file");
    ++line_no;
    const json header = json::parse(line);
    if (header.at("format").get<std::string>() != kScanLogFormat) {
      throw InputError("scan log: not a nofmcl scan log");
    }
    if (header.at("version").get<int>() != kScanLogVersion) {
      throw InputError("scan log: unsupported version");
    }
    expected = header.at("frames").get<std::size_t>();
    log.params = LidarParamsFromJson(header.at("lidar"));
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      LogFrame f;
      f.timestamp = j.at("t").get<double>();
      if (!j.at("pose").is_null()) f.pose = PoseFromJson(j.at("pose"));
      if (!j.at("odom").is_null()) f.odometry = PoseFromJson(j.at("odom"));
      for (const auto& r : j.at("ranges")) {
        f.ranges.push_back(r.is_null() ? kNoReturn : r.get<double>());
      }
      log.frames.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw InputError("scan log: line " + std::to_string(line_no) + ": " +
                     e.what());
  }
  if (log.frames.size() != expected) {
    throw InputError("scan log: header announces " + std::to_string(expected) +
                     " frames, found " + std::to_string(log.frames.size()));
  }
  log.Validate();
  return log;
}

void WriteScanLog(const ScanLog& log, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeScanLog(log));
}

ScanLog ReadScanLog(const std::filesystem::path& path) {
  return ParseScanLog(ReadFileText(path));
}

LogSplit SplitTail(const ScanLog& log, double fraction) {
  const std::size_t n = log.frames.size();
  std::size_t held = static_cast<std::size_t>(std::lround(fraction * n));
  if (held == 0 && n >= 2 && fraction > 0.0) held = 1;
  if (held >= n) held = n > 0 ? n - 1 : 0;
  LogSplit split;
  split.first_held_out = n - held;
  split.train.params = log.params;
  split.held_out.params = log.params;
  split.train.frames.assign(log.frames.begin(),
                            log.frames.begin() + split.first_held_out);
  split.held_out.frames.assign(log.frames.begin() + split.first_held_out,
                               log.frames.end());
  return split;
}

}  // namespace nofmcl::io
