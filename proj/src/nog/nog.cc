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

#include "nofmcl/nog/nog.h"

#include <cmath>

#include "nofmcl/core/error.h"

namespace nofmcl::nog {

std::optional<int> Nog::AxisIndex(double coord, double origin, double resolution,
                                  int cells) {
  const double u = (coord - origin) / resolution;
  if (!(u >= 0.0) || u > cells) return std::nullopt;
  // ceil(u) - 1 rounds boundaries down; the lower edge itself is cell 0.
  return std::max(0, static_cast<int>(std::ceil(u)) - 1);
}

void Nog::Validate() const {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InputError("nog: resolution must be > 0");
  }
  if (width < 1 || height < 1) throw InputError("nog: empty grid");
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("nog: value count does not match width * height");
  }
  for (float v : values) {
    if (!(v >= 0.0f && v <= 1.0f)) throw InputError("nog: value outside [0, 1]");
  }
}

int CellsToCover(double extent, double resolution) {
  return std::max(1, static_cast<int>(std::ceil(extent / resolution - 1e-9)));
}

Nog build_nog(const render::OccupancySource& source, const Box2& bounds,
              double resolution, int64_t max_cells) {
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InputError("nog: resolution must be > 0");
  }
  if (bounds.degenerate()) throw InputError("nog: degenerate bounds");
  const double w = std::ceil(bounds.width() / resolution - 1e-9);
  const double h = std::ceil(bounds.height() / resolution - 1e-9);
  if (w * h > static_cast<double>(max_cells)) {
    throw InputError("nog: " + std::to_string(static_cast<int64_t>(w * h)) +
                     " cells exceed the cap of " + std::to_string(max_cells));
  }
  Nog nog;
  nog.origin = bounds.min;
  nog.resolution = resolution;
  nog.width = CellsToCover(bounds.width(), resolution);
  nog.height = CellsToCover(bounds.height(), resolution);
  nog.values.resize(static_cast<std::size_t>(nog.width) * nog.height);

  std::vector<Vec2> row(nog.width);
  std::vector<double> probs(nog.width);
  for (int iy = 0; iy < nog.height; ++iy) {
    for (int ix = 0; ix < nog.width; ++ix) row[ix] = nog.cell_center(ix, iy);
    source.Query(row, probs);
    for (int ix = 0; ix < nog.width; ++ix) {
      nog.values[static_cast<std::size_t>(iy) * nog.width + ix] =
          static_cast<float>(probs[ix]);
    }
  }
  return nog;
}

Nog build_nog(const field::FieldModel& model, const Box2& bounds,
              double resolution, int64_t max_cells) {
  return build_nog(render::FieldSource(model), bounds, resolution, max_cells);
}

double lookup(const Nog& nog, const Vec2& p) {
  const auto ix = Nog::AxisIndex(p.x(), nog.origin.x(), nog.resolution, nog.width);
  if (!ix) return 0.0;
  const auto iy = Nog::AxisIndex(p.y(), nog.origin.y(), nog.resolution, nog.height);
  if (!iy) return 0.0;
  return nog.value(*ix, *iy);
}

void NogSource::Query(std::span<const Vec2> points,
                      std::span<double> probabilities) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    probabilities[i] = lookup(nog_, points[i]);
  }
}

io::Container NogToContainer(const Nog& nog) {
  io::Container c;
  c.type = kNogType;
  c.version = kNogFormatVersion;
  c.meta = {{"origin", {nog.origin.x(), nog.origin.y()}},
            {"resolution", nog.resolution},
            {"width", nog.width},
            {"height", nog.height}};
  c.blobs.push_back(io::Blob::FromFloats("values", {nog.height, nog.width},
                                         nog.values));
  return c;
}

Nog NogFromContainer(const io::Container& c) {
  if (c.type != kNogType) throw InputError("nog: wrong container type " + c.type);
  if (c.version != kNogFormatVersion) throw InputError("nog: unsupported version");
  Nog nog;
  try {
    const auto origin = c.meta.at("origin").get<std::vector<double>>();
    if (origin.size() != 2) throw InputError("nog: origin needs 2 numbers");
    nog.origin = Vec2(origin[0], origin[1]);
    nog.resolution = c.meta.at("resolution").get<double>();
    nog.width = c.meta.at("width").get<int>();
    nog.height = c.meta.at("height").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("nog: bad header: ") + e.what());
  }
  nog.values = c.blob("values").AsFloats();
  nog.Validate();
  return nog;
}

void SaveNog(const Nog& nog, const std::filesystem::path& path) {
  io::WriteContainer(NogToContainer(nog), path);
}

Nog LoadNog(const std::filesystem::path& path) {
  return NogFromContainer(io::ReadContainer(path, kNogType));
}

io::GrayImage NogToImage(const Nog& nog) {
  io::GrayImage image(nog.width, nog.height);
  for (int iy = 0; iy < nog.height; ++iy) {
    for (int ix = 0; ix < nog.width; ++ix) {
      image.at(ix, nog.height - 1 - iy) = io::ProbabilityToGray(nog.value(ix, iy));
    }
  }
  return image;
}

}  // namespace nofmcl::nog
