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

#ifndef NOFMCL_IO_IMAGE_H_
#define NOFMCL_IO_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace nofmcl::io {

// 8-bit grayscale image, row 0 at the top.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, uint8_t fill = 255)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

// Binary PGM (P5).
std::string EncodePgm(const GrayImage& image);
GrayImage DecodePgm(const std::string& bytes);
void WritePgm(const GrayImage& image, const std::filesystem::path& path);

// Probability in [0, 1] to a gray level; 1 is black.
inline uint8_t ProbabilityToGray(double p) {
  if (!(p > 0.0)) return 255;
  if (p >= 1.0) return 0;
  return static_cast<uint8_t>(255.0 - static_cast<int>(p * 255.0 + 0.5));
}

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_IMAGE_H_
