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

#ifndef NOFMCL_GRIDMAP_OCC_GRID_H_
#define NOFMCL_GRIDMAP_OCC_GRID_H_

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/io/container.h"
#include "nofmcl/io/image.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/render/occupancy_source.h"
#include "nofmcl/render/scan_predictor.h"

namespace nofmcl::gridmap {

inline constexpr const char* kGridType = "nofmcl.grid";
inline constexpr int kGridFormatVersion = 1;

struct SensorModel {
  double free_update = -0.4;
  double hit_update = 0.9;
  double clamp = 10.0;

  void Validate() const;
  bool operator==(const SensorModel&) const = default;
};

// Log-odds occupancy grid with the Nog cell layout.
struct OccGrid {
  Vec2 origin = Vec2::Zero();
  double resolution = 0.05;
  int width = 0;
  int height = 0;
  std::vector<float> log_odds;

  float at(int ix, int iy) const {
    return log_odds[static_cast<std::size_t>(iy) * width + ix];
  }
  float& at(int ix, int iy) {
    return log_odds[static_cast<std::size_t>(iy) * width + ix];
  }
  bool inside(int ix, int iy) const {
    return ix >= 0 && iy >= 0 && ix < width && iy < height;
  }
  Vec2 cell_center(int ix, int iy) const {
    return origin + resolution * Vec2(ix + 0.5, iy + 0.5);
  }
  double probability(int ix, int iy) const;
  // Cell index of p along both axes with the Nog boundary rule; may lie
  // outside the grid.
  Eigen::Vector2i cell_of(const Vec2& p) const;

  void Validate() const;
  bool operator==(const OccGrid&) const = default;
};

// Cells visited by Bresenham's line from `from` to `to`, both included.
std::vector<Eigen::Vector2i> bresenham(const Eigen::Vector2i& from,
                                       const Eigen::Vector2i& to);

// Integrates every beam of a posed log: cells traversed before the hit get
// free_update, the hit cell gets hit_update, values are clamped. No-return
// beams clear up to range_max. Without `bounds` the grid covers the sensor
// positions and hit points plus one metre. Throws InputError on an empty or
// unposed log.
OccGrid build_grid(const io::ScanLog& log, double resolution,
                   const SensorModel& model = {},
                   std::optional<Box2> bounds = std::nullopt);

// Marches each beam cell by cell; the first cell with probability > 0.5
// gives the range to its centre. Beams that leave the grid or pass
// range_max report kNoReturn.
LidarFrame raycast_grid(const OccGrid& grid, const Pose2& pose,
                        const LidarParams& params);
double raycast_beam(const OccGrid& grid, const Ray& ray, double range_min,
                    double range_max);

// Logistic of the nearest cell's log-odds; 0 outside the grid.
class GridSource : public render::OccupancySource {
 public:
  explicit GridSource(const OccGrid& grid) : grid_(grid) {}
  void Query(std::span<const Vec2> points,
             std::span<double> probabilities) const override;

 private:
  const OccGrid& grid_;
};

class GridScanPredictor : public render::ScanPredictor {
 public:
  explicit GridScanPredictor(const OccGrid& grid) : grid_(grid) {}
  void Predict(const Pose2& pose, const LidarParams& params,
               std::span<const int> beams,
               std::span<double> ranges) const override;

 private:
  const OccGrid& grid_;
};

io::Container GridToContainer(const OccGrid& grid);
OccGrid GridFromContainer(const io::Container& container);
void SaveGrid(const OccGrid& grid, const std::filesystem::path& path);
OccGrid LoadGrid(const std::filesystem::path& path);
io::GrayImage GridToImage(const OccGrid& grid);

}  // namespace nofmcl::gridmap

#endif  // NOFMCL_GRIDMAP_OCC_GRID_H_
