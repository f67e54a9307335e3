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

#include "nofmcl/io/plot.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "nofmcl/core/error.h"

namespace nofmcl::io {
namespace {

void DrawLine(GrayImage& img, int x0, int y0, int x1, int y1, uint8_t level) {
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    if (x0 >= 0 && y0 >= 0 && x0 < img.width && y0 < img.height) {
      img.at(x0, y0) = level;
    }
    if (x0 == x1 && y0 == y1) return;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

GrayImage LinePlot(const std::vector<Series>& series, int width, int height) {
  constexpr int kMargin = 20;
  if (width <= 2 * kMargin || height <= 2 * kMargin) {
    throw InputError("plot: image too small");
  }
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) throw InputError("plot: no finite points");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  GrayImage img(width, height);
  const int left = kMargin, right = width - kMargin;
  const int top = kMargin, bottom = height - kMargin;
  DrawLine(img, left, top, right, top, 0);
  DrawLine(img, left, bottom, right, bottom, 0);
  DrawLine(img, left, top, left, bottom, 0);
  DrawLine(img, right, top, right, bottom, 0);

  auto px = [&](double x) {
    return left + static_cast<int>(std::lround((x - xmin) / (xmax - xmin) * (right - left)));
  };
  auto py = [&](double y) {
    return bottom - static_cast<int>(std::lround((y - ymin) / (ymax - ymin) * (bottom - top)));
  };
  for (std::size_t k = 0; k < series.size(); ++k) {
    const uint8_t level = static_cast<uint8_t>(std::min<std::size_t>(160, 60 * k));
    bool have_prev = false;
    int prev_x = 0, prev_y = 0;
    for (const auto& [x, y] : series[k]) {
      if (!std::isfinite(x) || !std::isfinite(y)) {
        have_prev = false;
        continue;
      }
      const int cx = px(x), cy = py(y);
      if (have_prev) {
        DrawLine(img, prev_x, prev_y, cx, cy, level);
      } else {
        DrawLine(img, cx, cy, cx, cy, level);
      }
      prev_x = cx;
      prev_y = cy;
      have_prev = true;
    }
  }
  return img;
}

}  // namespace nofmcl::io
