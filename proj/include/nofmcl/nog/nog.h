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

#ifndef NOFMCL_NOG_NOG_H_
#define NOFMCL_NOG_NOG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "nofmcl/core/pose2.h"
#include "nofmcl/field/field_model.h"
#include "nofmcl/io/container.h"
#include "nofmcl/io/image.h"
#include "nofmcl/render/occupancy_source.h"

namespace nofmcl::nog {

inline constexpr int64_t kDefaultMaxCells = 100'000'000;
inline constexpr double kDefaultResolution = 0.05;
inline constexpr const char* kNogType = "nofmcl.nog";
inline constexpr int kNogFormatVersion = 1;

// Dense grid of cached occupancy values. Cell (ix, iy) covers
// origin + [ix, ix + 1) x [iy, iy + 1) cells; values are row-major with
// iy as the row.
struct Nog {
  Vec2 origin = Vec2::Zero();
  double resolution = kDefaultResolution;
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float value(int ix, int iy) const {
    return values[static_cast<std::size_t>(iy) * width + ix];
  }
  Vec2 cell_center(int ix, int iy) const {
    return origin + resolution * Vec2(ix + 0.5, iy + 0.5);
  }
  Box2 extent() const {
    return {origin, origin + resolution * Vec2(width, height)};
  }

  // Index of the cell whose centre is nearest to `coord` along one axis,
  // or nullopt outside [0, cells]. On a boundary between two cells the
  // lower index wins.
  static std::optional<int> AxisIndex(double coord, double origin,
                                      double resolution, int cells);

  // Throws InputError on a malformed grid.
  void Validate() const;
  bool operator==(const Nog&) const = default;
};

// Cells needed to cover `extent` metres.
int CellsToCover(double extent, double resolution);

// Stores the occupancy of every cell centre. Throws InputError when
// width * height exceeds max_cells or the inputs are degenerate.
Nog build_nog(const render::OccupancySource& source, const Box2& bounds,
              double resolution, int64_t max_cells = kDefaultMaxCells);
Nog build_nog(const field::FieldModel& model, const Box2& bounds,
              double resolution, int64_t max_cells = kDefaultMaxCells);

// Nearest-cell value; 0 outside the grid.
double lookup(const Nog& nog, const Vec2& p);

class NogSource : public render::OccupancySource {
 public:
  explicit NogSource(const Nog& nog) : nog_(nog) {}
  void Query(std::span<const Vec2> points,
             std::span<double> probabilities) const override;

 private:
  const Nog& nog_;
};

io::Container NogToContainer(const Nog& nog);
Nog NogFromContainer(const io::Container& container);
void SaveNog(const Nog& nog, const std::filesystem::path& path);
Nog LoadNog(const std::filesystem::path& path);

// Top row of the image is the highest y.
io::GrayImage NogToImage(const Nog& nog);

}  // namespace nofmcl::nog

#endif  // NOFMCL_NOG_NOG_H_
