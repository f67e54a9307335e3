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

#include "nofmcl/io/container.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "nofmcl/core/error.h"

namespace nofmcl::io {
namespace {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

constexpr char kMagic[8] = {'N', 'O', 'F', 'M', 'C', 'L', '\r', '\n'};

std::size_t ElementSize(DType dtype) {
  return dtype == DType::kF32 ? 4 : 8;
}

const char* DTypeName(DType dtype) {
  return dtype == DType::kF32 ? "f32" : "f64";
}

DType ParseDType(const std::string& name) {
  if (name == "f32") return DType::kF32;
  if (name == "f64") return DType::kF64;
  throw InputError("container: unknown dtype '" + name + "'");
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t GetU32(std::span<const uint8_t> bytes, std::size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

template <typename T>
std::vector<uint8_t> ToBytes(std::span<const T> values) {
  std::vector<uint8_t> bytes(values.size() * sizeof(T));
  if (!bytes.empty()) std::memcpy(bytes.data(), values.data(), bytes.size());
  return bytes;
}

template <typename T>
std::vector<T> FromBytes(const std::vector<uint8_t>& bytes) {
  std::vector<T> out(bytes.size() / sizeof(T));
  if (!out.empty()) std::memcpy(out.data(), bytes.data(), out.size() * sizeof(T));
  return out;
}

}  // namespace

int64_t Blob::num_elements() const {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

Blob Blob::FromFloats(std::string name, std::vector<int64_t> shape,
                      std::span<const float> values) {
  Blob b{std::move(name), DType::kF32, std::move(shape), ToBytes(values)};
  if (b.num_elements() != static_cast<int64_t>(values.size())) {
    throw std::invalid_argument("container: blob shape does not match data");
  }
  return b;
}

Blob Blob::FromDoubles(std::string name, std::vector<int64_t> shape,
                       std::span<const double> values) {
  Blob b{std::move(name), DType::kF64, std::move(shape), ToBytes(values)};
  if (b.num_elements() != static_cast<int64_t>(values.size())) {
    throw std::invalid_argument("container: blob shape does not match data");
  }
  return b;
}

std::vector<float> Blob::AsFloats() const {
  if (dtype == DType::kF32) return FromBytes<float>(bytes);
  const auto d = FromBytes<double>(bytes);
  return {d.begin(), d.end()};
}

std::vector<double> Blob::AsDoubles() const {
  if (dtype == DType::kF64) return FromBytes<double>(bytes);
  const auto f = FromBytes<float>(bytes);
  return {f.begin(), f.end()};
}

const Blob& Container::blob(const std::string& name) const {
  for (const Blob& b : blobs) {
    if (b.name == name) return b;
  }
  throw InputError("container: missing blob '" + name + "' in " + type);
}

std::vector<uint8_t> SerializeContainer(const Container& container) {
  nlohmann::json header;
  header["type"] = container.type;
  header["version"] = container.version;
  header["meta"] = container.meta;
  header["blobs"] = nlohmann::json::array();
  for (const Blob& b : container.blobs) {
    header["blobs"].push_back(
        {{"name", b.name}, {"dtype", DTypeName(b.dtype)}, {"shape", b.shape}});
  }
  const std::string text = header.dump();

  std::vector<uint8_t> out(std::begin(kMagic), std::end(kMagic));
  PutU32(out, kContainerVersion);
  PutU32(out, static_cast<uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const Blob& b : container.blobs) {
    out.insert(out.end(), b.bytes.begin(), b.bytes.end());
  }
  return out;
}

Container ParseContainer(std::span<const uint8_t> bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw InputError("container: bad magic (not a nofmcl binary file)");
  }
  const uint32_t version = GetU32(bytes, 8);
  if (version != kContainerVersion) {
    throw InputError("container: unsupported container version " +
                     std::to_string(version));
  }
  const uint32_t header_len = GetU32(bytes, 12);
  if (16 + static_cast<std::size_t>(header_len) > bytes.size()) {
    throw InputError("container: truncated header");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 16,
                                   bytes.begin() + 16 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("container: bad header: ") + e.what());
  }

  Container c;
  try {
    c.type = header.at("type").get<std::string>();
    c.version = header.at("version").get<int>();
    c.meta = header.at("meta");
    std::size_t offset = 16 + header_len;
    for (const auto& entry : header.at("blobs")) {
      Blob b;
      b.name = entry.at("name").get<std::string>();
      b.dtype = ParseDType(entry.at("dtype").get<std::string>());
      b.shape = entry.at("shape").get<std::vector<int64_t>>();
      const int64_t n = b.num_elements();
      if (n < 0) throw InputError("container: negative blob shape");
      const std::size_t size = static_cast<std::size_t>(n) * ElementSize(b.dtype);
      if (offset + size > bytes.size()) {
        throw InputError("container: truncated payload for blob '" + b.name + "'");
      }
      b.bytes.assign(bytes.begin() + offset, bytes.begin() + offset + size);
      offset += size;
      c.blobs.push_back(std::move(b));
    }
    if (offset != bytes.size()) {
      throw InputError("container: trailing bytes after payload");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("container: malformed header: ") + e.what());
  }
  return c;
}

void WriteContainer(const Container& container,
                    const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeContainer(container));
}

Container ReadContainer(const std::filesystem::path& path,
                        const std::string& expected_type) {
  const auto bytes = ReadFileBytes(path);
  Container c = ParseContainer(bytes);
  if (!expected_type.empty() && c.type != expected_type) {
    throw InputError("container: " + path.string() + " holds '" + c.type +
                     "', expected '" + expected_type + "'");
  }
  return c;
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> data) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InputError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place: " + path.string());
  }
}

void WriteFileAtomic(const std::filesystem::path& path, const std::string& text) {
  WriteFileAtomic(path, std::span<const uint8_t>(
                            reinterpret_cast<const uint8_t*>(text.data()),
                            text.size()));
}

std::vector<uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string ReadFileText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nofmcl::io
