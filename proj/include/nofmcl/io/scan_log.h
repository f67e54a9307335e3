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

// Line-delimited JSON scan logs. The first line is a header
//   {"format":"nofmcl.scanlog","version":1,"frames":N,"lidar":{...}}
// and every following line is one frame
//   {"t":..,"pose":[x,y,theta]|null,"odom":[dx,dy,dtheta]|null,
//    "ranges":[r0, null, ...]}
// where null ranges are no-return beams and "odom" is the odometry delta
// since the previous frame, expressed in the previous robot frame.

#ifndef NOFMCL_IO_SCAN_LOG_H_
#define NOFMCL_IO_SCAN_LOG_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nofmcl/core/lidar.h"

namespace nofmcl::io {

inline constexpr const char* kScanLogFormat = "nofmcl.scanlog";
inline constexpr int kScanLogVersion = 1;

struct LogFrame {
  double timestamp = 0.0;
  std::optional<Pose2> pose;
  std::optional<Pose2> odometry;
  std::vector<double> ranges;
};

struct ScanLog {
  LidarParams params;
  std::vector<LogFrame> frames;

  LidarFrame lidar_frame(std::size_t i) const {
    return {frames[i].timestamp, frames[i].ranges, params};
  }
  bool all_posed() const;
  bool all_have_odometry() const;
  // Throws InputError on size or range violations.
  void Validate() const;
};

nlohmann::json LidarParamsToJson(const LidarParams& params);
LidarParams LidarParamsFromJson(const nlohmann::json& j);
nlohmann::json PoseToJson(const Pose2& pose);
Pose2 PoseFromJson(const nlohmann::json& j);

std::string SerializeScanLog(const ScanLog& log);
ScanLog ParseScanLog(std::string_view text);
void WriteScanLog(const ScanLog& log, const std::filesystem::path& path);
ScanLog ReadScanLog(const std::filesystem::path& path);

// Contiguous split: the last `fraction` of frames (rounded, at least one
// when the log has two or more frames) is held out.
struct LogSplit {
  ScanLog train;
  ScanLog held_out;
  std::size_t first_held_out = 0;
};
LogSplit SplitTail(const ScanLog& log, double fraction);

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_SCAN_LOG_H_
