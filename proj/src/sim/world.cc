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

#include "nofmcl/sim/world.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"

namespace nofmcl::sim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double HitSegment(const Ray& ray, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const Vec2 ao = s.a - ray.origin;
  const double denom = Cross(ray.direction, e);
  const double len = e.norm();
  if (std::abs(denom) <= 1e-12 * len) {
    // Parallel. Only a collinear segment can be touched.
    if (std::abs(Cross(ao, ray.direction)) > 1e-12 * std::max(1.0, ao.norm())) {
      return kInf;
    }
    const double ta = ao.dot(ray.direction);
    const double tb = (s.b - ray.origin).dot(ray.direction);
    if (ta < 0.0 && tb < 0.0) return kInf;
    if ((ta < 0.0) != (tb < 0.0)) return 0.0;
    return std::min(ta, tb);
  }
  const double t = Cross(ao, e) / denom;
  const double u = Cross(ao, ray.direction) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return kInf;
  return t;
}

double PointSegmentDistance(const Vec2& p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double t = std::clamp((p - s.a).dot(e) / e.squaredNorm(), 0.0, 1.0);
  return (s.a + t * e - p).norm();
}

WorldMap Rectangles(std::string name, std::vector<Box2> boxes,
                    std::vector<Segment> extra, double margin) {
  WorldMap w;
  w.name = std::move(name);
  for (const Box2& b : boxes) {
    const Vec2 p00 = b.min, p11 = b.max;
    const Vec2 p10(b.max.x(), b.min.y()), p01(b.min.x(), b.max.y());
    w.segments.push_back({p00, p10});
    w.segments.push_back({p10, p11});
    w.segments.push_back({p11, p01});
    w.segments.push_back({p01, p00});
  }
  for (auto& s : extra) w.segments.push_back(s);
  w.bounds = {boxes.front().min - Vec2(margin, margin),
              boxes.front().max + Vec2(margin, margin)};
  return w;
}

}  // namespace

void WorldMap::Validate() const {
  if (bounds.degenerate()) throw InputError("world: degenerate bounds");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    if (!s.a.allFinite() || !s.b.allFinite() || (s.b - s.a).norm() == 0.0) {
      throw InputError("world: segment " + std::to_string(i) +
                       " is degenerate");
    }
    if (!bounds.contains(s.a) || !bounds.contains(s.b)) {
      throw InputError("world: segment " + std::to_string(i) +
                       " leaves the bounds");
    }
  }
}

double FirstHit(const WorldMap& world, const Ray& ray) {
  double best = kInf;
  for (const Segment& s : world.segments) {
    best = std::min(best, HitSegment(ray, s));
  }
  return best;
}

double cast_ray_exact(const WorldMap& world, const Ray& ray, double range_min,
                      double range_max) {
  const double d = FirstHit(world, ray);
  return (d >= range_min && d <= range_max) ? d : kNoReturn;
}

LidarFrame cast_scan(const WorldMap& world, const Pose2& pose,
                     const LidarParams& params) {
  LidarFrame frame;
  frame.params = params;
  frame.ranges.reserve(params.num_beams);
  for (const Ray& ray : beams_of(pose, params)) {
    frame.ranges.push_back(
        cast_ray_exact(world, ray, params.range_min, params.range_max));
  }
  return frame;
}

double DistanceToWalls(const WorldMap& world, const Vec2& p) {
  double best = kInf;
  for (const Segment& s : world.segments) {
    best = std::min(best, PointSegmentDistance(p, s));
  }
  return best;
}

std::vector<WorldMap> builtin_worlds() {
  std::vector<WorldMap> worlds;
  worlds.push_back(Rectangles("room", {{Vec2(0, 0), Vec2(10, 8)}}, {}, 0.5));
  // A doorway splits the left room from the right one; a partial wall makes
  // an alcove in the right room so that the layout has no symmetry.
  worlds.push_back(Rectangles("office", {{Vec2(0, 0), Vec2(12, 8)}},
                              {{Vec2(5, 0), Vec2(5, 3.5)},
                               {Vec2(5, 4.5), Vec2(5, 8)},
                               {Vec2(8, 5), Vec2(12, 5)}},
                              0.5));
  worlds.push_back(Rectangles(
      "corridor-loop", {{Vec2(0, 0), Vec2(12, 9)}, {Vec2(1.5, 1.5), Vec2(10.5, 7.5)}},
      {}, 0.5));
  return worlds;
}

WorldMap builtin_world(const std::string& name) {
  for (auto& w : builtin_worlds()) {
    if (w.name == name) return w;
  }
  throw InputError("unknown world '" + name + "'");
}

std::string SerializeWorld(const WorldMap& world) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : world.segments) {
    segs.push_back({s.a.x(), s.a.y(), s.b.x(), s.b.y()});
  }
  nlohmann::json j = {
      {"format", "nofmcl.world"},
      {"version", 1},
      {"name", world.name},
      {"bounds",
       {world.bounds.min.x(), world.bounds.min.y(), world.bounds.max.x(),
        world.bounds.max.y()}},
      {"segments", std::move(segs)}};
  return j.dump(1) + "\n";
}

WorldMap ParseWorld(const std::string& text) {
  WorldMap w;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "nofmcl.world") {
      throw InputError("world: not a nofmcl world file");
    }
    if (j.at("version").get<int>() != 1) {
      throw InputError("world: unsupported version");
    }
    w.name = j.at("name").get<std::string>();
    const auto b = j.at("bounds").get<std::vector<double>>();
    if (b.size() != 4) throw InputError("world: bounds need 4 numbers");
    w.bounds = {Vec2(b[0], b[1]), Vec2(b[2], b[3])};
    for (const auto& s : j.at("segments")) {
      const auto v = s.get<std::vector<double>>();
      if (v.size() != 4) throw InputError("world: segments need 4 numbers");
      w.segments.push_back({Vec2(v[0], v[1]), Vec2(v[2], v[3])});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("world: ") + e.what());
  }
  w.Validate();
  return w;
}

void WriteWorld(const WorldMap& world, const std::filesystem::path& path) {
  io::WriteFileAtomic(path, SerializeWorld(world));
}

WorldMap ReadWorld(const std::filesystem::path& path) {
  return ParseWorld(io::ReadFileText(path));
}

void ExactScanPredictor::Predict(const Pose2& pose, const LidarParams& params,
                                 std::span<const int> beams,
                                 std::span<double> ranges) const {
  for (std::size_t k = 0; k < beams.size(); ++k) {
    ranges[k] = cast_ray_exact(world_, beam_ray(pose, params, beams[k]),
                               params.range_min, params.range_max);
  }
}

}  // namespace nofmcl::sim
