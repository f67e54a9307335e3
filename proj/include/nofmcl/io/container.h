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

// Self-describing binary container:
//
//   bytes 0..7   magic "NOFMCL\r\n"
//   bytes 8..11  container version, uint32 little endian
//   bytes 12..15 header length H, uint32 little endian
//   H bytes      compact JSON header: {"type", "version", "meta", "blobs"}
//   payload      blobs back to back, raw little-endian, in header order
//
// Each blob entry in the header records name, dtype ("f32" / "f64") and
// shape. Writing the same Container twice produces identical bytes.

#ifndef NOFMCL_IO_CONTAINER_H_
#define NOFMCL_IO_CONTAINER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace nofmcl::io {

enum class DType { kF32, kF64 };

struct Blob {
  std::string name;
  DType dtype = DType::kF32;
  std::vector<int64_t> shape;
  std::vector<uint8_t> bytes;

  int64_t num_elements() const;

  static Blob FromFloats(std::string name, std::vector<int64_t> shape,
                         std::span<const float> values);
  static Blob FromDoubles(std::string name, std::vector<int64_t> shape,
                          std::span<const double> values);
  std::vector<float> AsFloats() const;
  std::vector<double> AsDoubles() const;
};

struct Container {
  std::string type;
  int version = 1;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<Blob> blobs;

  const Blob& blob(const std::string& name) const;
};

inline constexpr uint32_t kContainerVersion = 1;

std::vector<uint8_t> SerializeContainer(const Container& container);
Container ParseContainer(std::span<const uint8_t> bytes);

void WriteContainer(const Container& container,
                    const std::filesystem::path& path);
// Throws InputError on I/O failure, a bad magic or a type mismatch (when
// expected_type is non-empty).
Container ReadContainer(const std::filesystem::path& path,
                        const std::string& expected_type = "");

// Writes `data` to `path` through a temporary file in the same directory
// and renames it into place, so a failed write leaves no partial file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> data);
void WriteFileAtomic(const std::filesystem::path& path, const std::string& text);
std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path);
std::string ReadFileText(const std::filesystem::path& path);

}  // namespace nofmcl::io

#endif  // NOFMCL_IO_CONTAINER_H_
