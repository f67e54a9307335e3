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

#ifndef NOFMCL_RENDER_OCCUPANCY_SOURCE_H_
#define NOFMCL_RENDER_OCCUPANCY_SOURCE_H_

#include <functional>
#include <span>
#include <utility>

#include "nofmcl/core/pose2.h"
#include "nofmcl/field/field_model.h"

namespace nofmcl::render {

// Anything that can report an occupancy probability in [0, 1] for a batch
// of world points. Implementations must be safe for concurrent queries.
class OccupancySource {
 public:
  virtual ~OccupancySource() = default;
  virtual void Query(std::span<const Vec2> points,
                     std::span<double> probabilities) const = 0;
};

// Inference-mode queries against a trained field.
class FieldSource : public OccupancySource {
 public:
  explicit FieldSource(const field::FieldModel& model) : model_(model) {}
  void Query(std::span<const Vec2> points,
             std::span<double> probabilities) const override;

 private:
  const field::FieldModel& model_;
};

// Wraps a pointwise function; mostly for tests and analytic fields.
class FunctionSource : public OccupancySource {
 public:
  explicit FunctionSource(std::function<double(const Vec2&)> fn)
      : fn_(std::move(fn)) {}
  void Query(std::span<const Vec2> points,
             std::span<double> probabilities) const override {
    for (std::size_t i = 0; i < points.size(); ++i) {
      probabilities[i] = fn_(points[i]);
    }
  }

 private:
  std::function<double(const Vec2&)> fn_;
};

}  // namespace nofmcl::render

#endif  // NOFMCL_RENDER_OCCUPANCY_SOURCE_H_
