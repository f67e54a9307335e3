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

#ifndef NOFMCL_SIM_WORLD_H_
#define NOFMCL_SIM_WORLD_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nofmcl/core/lidar.h"
#include "nofmcl/render/scan_predictor.h"

namespace nofmcl::sim {

struct Segment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
};

// A 2D world made of line segments.
struct WorldMap {
  std::string name;
  std::vector<Segment> segments;
  Box2 bounds;

  // Throws InputError for zero-length or out-of-bounds segments.
  void Validate() const;
};

// Distance along `ray` to the first segment it touches, or +infinity.
// A ray collinear with a segment reports the nearest endpoint ahead (zero
// if the origin lies on the segment).
double FirstHit(const WorldMap& world, const Ray& ray);

// FirstHit, reported as kNoReturn unless it lies in [range_min, range_max].
double cast_ray_exact(const WorldMap& world, const Ray& ray, double range_min,
                      double range_max);

LidarFrame cast_scan(const WorldMap& world, const Pose2& pose,
                     const LidarParams& params);

// Minimum distance from p to any segment.
double DistanceToWalls(const WorldMap& world, const Vec2& p);

// "room", "office" and "corridor-loop".
std::vector<WorldMap> builtin_worlds();
// Throws InputError for unknown names.
WorldMap builtin_world(const std::string& name);

// World files are JSON:
//   {"format":"nofmcl.world","version":1,"name":..,
//    "bounds":[xmin,ymin,xmax,ymax],"segments":[[x1,y1,x2,y2],...]}
std::string SerializeWorld(const WorldMap& world);
WorldMap ParseWorld(const std::string& text);
void WriteWorld(const WorldMap& world, const std::filesystem::path& path);
WorldMap ReadWorld(const std::filesystem::path& path);

// Exact ray casting as an observation source for the filter.
class ExactScanPredictor : public render::ScanPredictor {
 public:
  explicit ExactScanPredictor(const WorldMap& world) : world_(world) {}
  void Predict(const Pose2& pose, const LidarParams& params,
               std::span<const int> beams,
               std::span<double> ranges) const override;

 private:
  const WorldMap& world_;
};

}  // namespace nofmcl::sim

#endif  // NOFMCL_SIM_WORLD_H_
