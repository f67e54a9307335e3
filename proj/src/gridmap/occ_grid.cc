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

#include "nofmcl/gridmap/occ_grid.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "nofmcl/core/error.h"
#include "nofmcl/nog/nog.h"

namespace nofmcl::gridmap {
namespace {

// Calls visit(cell) along the line until it returns false.
template <typename Visit>
void VisitLine(Eigen::Vector2i from, const Eigen::Vector2i& to, Visit&& visit) {
  const int dx = std::abs(to.x() - from.x());
  const int dy = -std::abs(to.y() - from.y());
  const int sx = from.x() < to.x() ? 1 : -1;
  const int sy = from.y() < to.y() ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (!visit(from)) return;
    if (from == to) return;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      from.x() += sx;
    }
    if (e2 <= dx) {
      err += dx;
      from.y() += sy;
    }
  }
}

int AxisCell(double coord, double origin, double resolution) {
  const double u = (coord - origin) / resolution;
  if (u == 0.0) return 0;
  return static_cast<int>(std::ceil(u)) - 1;
}

}  // namespace

void SensorModel::Validate() const {
  if (!(free_update <= 0.0) || !(hit_update >= 0.0) || !(clamp > 0.0)) {
    throw InputError("grid: free_update <= 0 <= hit_update and clamp > 0 required");
  }
}

double OccGrid::probability(int ix, int iy) const {
  return 1.0 / (1.0 + std::exp(-static_cast<double>(at(ix, iy))));
}

Eigen::Vector2i OccGrid::cell_of(const Vec2& p) const {
  return {AxisCell(p.x(), origin.x(), resolution),
          AxisCell(p.y(), origin.y(), resolution)};
}

void OccGrid::Validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InputError("grid: resolution must be > 0");
  }
  if (width < 1 || height < 1) throw InputError("grid: empty grid");
  if (log_odds.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("grid: value count does not match width * height");
  }
  for (float v : log_odds) {
    if (!std::isfinite(v)) throw InputError("grid: non-finite log-odds");
  }
}

std::vector<Eigen::Vector2i> bresenham(const Eigen::Vector2i& from,
                                       const Eigen::Vector2i& to) {
  std::vector<Eigen::Vector2i> cells;
  VisitLine(from, to, [&](const Eigen::Vector2i& c) {
    cells.push_back(c);
    return true;
  });
  return cells;
}

OccGrid build_grid(const io::ScanLog& log, double resolution,
                   const SensorModel& model, std::optional<Box2> bounds) {
  model.Validate();
  if (log.frames.empty()) throw InputError("grid: empty scan log");
  if (!log.all_posed()) throw InputError("grid: every frame needs a pose");
  if (!(resolution > 0.0)) throw InputError("grid: resolution must be > 0");

  if (!bounds) {
    Box2 box{Vec2::Constant(INFINITY), Vec2::Constant(-INFINITY)};
    auto grow = [&](const Vec2& p) {
      box.min = box.min.cwiseMin(p);
      box.max = box.max.cwiseMax(p);
    };
    for (const auto& f : log.frames) {
      const auto rays = beams_of(*f.pose, log.params);
      grow(rays.empty() ? f.pose->translation() : rays.front().origin);
      for (std::size_t i = 0; i < rays.size(); ++i) {
        if (HasReturn(f.ranges[i])) grow(rays[i].at(f.ranges[i]));
      }
    }
    bounds = Box2{box.min - Vec2(1, 1), box.max + Vec2(1, 1)};
  }
  OccGrid grid;
  grid.origin = bounds->min;
  grid.resolution = resolution;
  grid.width = nog::CellsToCover(bounds->width(), resolution);
  grid.height = nog::CellsToCover(bounds->height(), resolution);
  if (static_cast<double>(grid.width) * grid.height > nog::kDefaultMaxCells) {
    throw InputError("grid: too many cells");
  }
  grid.log_odds.assign(static_cast<std::size_t>(grid.width) * grid.height, 0.0f);

  const float lo = static_cast<float>(-model.clamp);
  const float hi = static_cast<float>(model.clamp);
  auto add = [&](const Eigen::Vector2i& c, double delta) {
    float& v = grid.at(c.x(), c.y());
    v = std::clamp(static_cast<float>(v + delta), lo, hi);
  };
  for (const auto& f : log.frames) {
    const auto rays = beams_of(*f.pose, log.params);
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const bool hit = HasReturn(f.ranges[i]);
      const Eigen::Vector2i start = grid.cell_of(rays[i].origin);
      const Eigen::Vector2i end = grid.cell_of(
          rays[i].at(hit ? f.ranges[i] : log.params.range_max));
      VisitLine(start, end, [&](const Eigen::Vector2i& c) {
        if (!grid.inside(c.x(), c.y())) return true;
        if (hit && c == end) {
          add(c, model.hit_update);
        } else {
          add(c, model.free_update);
        }
        return true;
      });
    }
  }
  return grid;
}

double raycast_beam(const OccGrid& grid, const Ray& ray, double range_min,
                    double range_max) {
  const Eigen::Vector2i start = grid.cell_of(ray.origin);
  if (!grid.inside(start.x(), start.y())) return kNoReturn;
  const Eigen::Vector2i end = grid.cell_of(ray.at(range_max));
  double range = kNoReturn;
  VisitLine(start, end, [&](const Eigen::Vector2i& c) {
    if (!grid.inside(c.x(), c.y())) return false;
    if (grid.at(c.x(), c.y()) > 0.0f) {
      const double d = (grid.cell_center(c.x(), c.y()) - ray.origin).norm();
      if (d > range_max) return false;
      if (d >= range_min) {
        range = d;
        return false;
      }
    }
    return true;
  });
  return range;
}

LidarFrame raycast_grid(const OccGrid& grid, const Pose2& pose,
                        const LidarParams& params) {
  LidarFrame frame;
  frame.params = params;
  for (const Ray& ray : beams_of(pose, params)) {
    frame.ranges.push_back(
        raycast_beam(grid, ray, params.range_min, params.range_max));
  }
  return frame;
}

void GridSource::Query(std::span<const Vec2> points,
                       std::span<double> probabilities) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto ix = nog::Nog::AxisIndex(points[i].x(), grid_.origin.x(),
                                        grid_.resolution, grid_.width);
    const auto iy = nog::Nog::AxisIndex(points[i].y(), grid_.origin.y(),
                                        grid_.resolution, grid_.height);
    probabilities[i] = (ix && iy) ? grid_.probability(*ix, *iy) : 0.0;
  }
}

void GridScanPredictor::Predict(const Pose2& pose, const LidarParams& params,
                                std::span<const int> beams,
                                std::span<double> ranges) const {
  for (std::size_t k = 0; k < beams.size(); ++k) {
    ranges[k] = raycast_beam(grid_, beam_ray(pose, params, beams[k]),
                             params.range_min, params.range_max);
  }
}

io::Container GridToContainer(const OccGrid& grid) {
  io::Container c;
  c.type = kGridType;
  c.version = kGridFormatVersion;
  c.meta = {{"origin", {grid.origin.x(), grid.origin.y()}},
            {"resolution", grid.resolution},
            {"width", grid.width},
            {"height", grid.height}};
  c.blobs.push_back(
      io::Blob::FromFloats("log_odds", {grid.height, grid.width}, grid.log_odds));
  return c;
}

OccGrid GridFromContainer(const io::Container& c) {
  if (c.type != kGridType) throw InputError("grid: wrong container type " + c.type);
  if (c.version != kGridFormatVersion) throw InputError("grid: unsupported version");
  OccGrid grid;
  try {
    const auto origin = c.meta.at("origin").get<std::vector<double>>();
    if (origin.size() != 2) throw InputError("grid: origin needs 2 numbers");
    grid.origin = Vec2(origin[0], origin[1]);
    grid.resolution = c.meta.at("resolution").get<double>();
    grid.width = c.meta.at("width").get<int>();
    grid.height = c.meta.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("grid: bad header: ") + e.what());
  }
  grid.log_odds = c.blob("log_odds").AsFloats();
  grid.Validate();
  return grid;
}

void SaveGrid(const OccGrid& grid, const std::filesystem::path& path) {
  io::WriteContainer(GridToContainer(grid), path);
}

OccGrid LoadGrid(const std::filesystem::path& path) {
  return GridFromContainer(io::ReadContainer(path, kGridType));
}

io::GrayImage GridToImage(const OccGrid& grid) {
  io::GrayImage image(grid.width, grid.height);
  for (int iy = 0; iy < grid.height; ++iy) {
    for (int ix = 0; ix < grid.width; ++ix) {
      image.at(ix, grid.height - 1 - iy) =
          grid.at(ix, iy) == 0.0f ? 205 : io::ProbabilityToGray(grid.probability(ix, iy));
    }
  }
  return image;
}

}  // namespace nofmcl::gridmap
