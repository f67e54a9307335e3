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

#ifndef NOFMCL_FIELD_ENCODING_H_
#define NOFMCL_FIELD_ENCODING_H_

#include <cmath>
#include <vector>

#include "nofmcl/core/pose2.h"

namespace nofmcl::field {

struct EncodingConfig {
  int num_frequencies = 10;
  bool include_input = true;

  int dim() const { return (include_input ? 2 : 0) + 4 * num_frequencies; }
  bool operator==(const EncodingConfig&) const = default;
};

// Writes the sinusoidal lifting of p into out[0 .. config.dim()):
//   [p, sin(2^0 p), cos(2^0 p), ..., sin(2^(L-1) p), cos(2^(L-1) p)]
// where each sin/cos block holds the x then the y component.
template <typename Scalar>
void EncodeInto(const Vec2& p, const EncodingConfig& config, Scalar* out) {
  int k = 0;
  if (config.include_input) {
    out[k++] = static_cast<Scalar>(p.x());
    out[k++] = static_cast<Scalar>(p.y());
  }
  double freq = 1.0;
  for (int l = 0; l < config.num_frequencies; ++l, freq *= 2.0) {
    out[k++] = static_cast<Scalar>(std::sin(freq * p.x()));
    out[k++] = static_cast<Scalar>(std::sin(freq * p.y()));
    out[k++] = static_cast<Scalar>(std::cos(freq * p.x()));
    out[k++] = static_cast<Scalar>(std::cos(freq * p.y()));
  }
}

inline std::vector<double> encode(const Vec2& p, const EncodingConfig& config) {
  std::vector<double> out(config.dim());
  EncodeInto(p, config, out.data());
  return out;
}

}  // namespace nofmcl::field

#endif  // NOFMCL_FIELD_ENCODING_H_
