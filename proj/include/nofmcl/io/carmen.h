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

#ifndef NOFMCL_IO_CARMEN_H_
#define NOFMCL_IO_CARMEN_H_

#include <filesystem>
#include <optional>
#include <string>

#include "nofmcl/io/scan_log.h"

namespace nofmcl::io {

struct CarmenOptions {
  // Sensor geometry; when absent it is inferred from the first FLASER
  // line: angle_min = -pi/2, pi/B radians between beams, ranges in
  // [0, 80] m.
  std::optional<LidarParams> lidar;
  double default_range_max = 80.0;
};

struct CarmenReport {
  int flaser_lines = 0;  // accepted
  int odom_lines = 0;
  int skipped_lines = 0;  // malformed FLASER/ODOM lines
  int ignored_lines = 0;  // comments, blank lines and other record types
};

struct CarmenLog {
  ScanLog log;
  CarmenReport report;
};

// FLASER n r_1 .. r_n x y theta odom_x odom_y odom_theta t host t_log.
// The laser pose becomes the frame pose; odometry deltas come from the
// odom pose of consecutive FLASER lines (identity for the first). Ranges
// outside (range_min, range_max) become no-returns. Throws InputError if
// no FLASER line is valid.
CarmenLog ParseCarmen(const std::string& text, const CarmenOptions& options = {});
CarmenLog ReadCarmen(const std::filesystem::path& path,
                     const CarmenOptions& options = {});

// Default geometry for a scanner with `num_beams` beams.
LidarParams CarmenLidarParams(int num_beams, double range_max = 80.0);

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_CARMEN_H_
