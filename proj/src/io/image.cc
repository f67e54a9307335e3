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

#include "nofmcl/io/image.h"

#include <sstream>

#include "nofmcl/core/error.h"
#include "nofmcl/io/container.h"

namespace nofmcl::io {

std::string EncodePgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()),
             image.pixels.size());
  return out;
}

GrayImage DecodePgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || h <= 0 || maxval != 255 || in.get() == EOF) {
    throw InputError("pgm: unsupported header");
  }
  GrayImage image(w, h);
  const auto offset = static_cast<std::size_t>(in.tellg());
  if (bytes.size() != offset + image.pixels.size()) {
    throw InputError("pgm: payload size mismatch");
  }
  std::copy(bytes.begin() + offset, bytes.end(), image.pixels.begin());
  return image;
}

void WritePgm(const GrayImage& image, const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodePgm(image));
}

}  // namespace nofmcl::io
