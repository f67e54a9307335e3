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

#include "nofmcl/field/checkpoint.h"

#include <string>
#include <type_traits>

#include "nofmcl/core/error.h"

namespace nofmcl::field {
namespace {

template <typename Scalar>
io::Blob MakeBlob(std::string name, std::vector<int64_t> shape,
                  const Scalar* data, std::size_t n) {
  if constexpr (std::is_same_v<Scalar, float>) {
    return io::Blob::FromFloats(std::move(name), std::move(shape), {data, n});
  } else {
    return io::Blob::FromDoubles(std::move(name), std::move(shape), {data, n});
  }
}

template <typename Scalar>
std::vector<Scalar> BlobValues(const io::Blob& blob, int64_t expected) {
  if (blob.num_elements() != expected) {
    throw InputError("model: blob '" + blob.name + "' has the wrong size");
  }
  if constexpr (std::is_same_v<Scalar, float>) {
    return blob.AsFloats();
  } else {
    return blob.AsDoubles();
  }
}

template <typename Dense>
void Fill(Dense& dst, const std::vector<typename Dense::Scalar>& values) {
  std::copy(values.begin(), values.end(), dst.data());
}

}  // namespace

nlohmann::json FieldConfigToJson(const FieldConfig& c) {
  return {{"num_frequencies", c.encoding.num_frequencies},
          {"include_input", c.encoding.include_input},
          {"hidden_width", c.hidden_width},
          {"num_hidden_layers", c.num_hidden_layers},
          {"norm_momentum", c.norm_momentum},
          {"norm_epsilon", c.norm_epsilon},
          {"head_bias_init", c.head_bias_init}};
}

FieldConfig FieldConfigFromJson(const nlohmann::json& j) {
  FieldConfig c;
  try {
    c.encoding.num_frequencies = j.at("num_frequencies").get<int>();
    c.encoding.include_input = j.at("include_input").get<bool>();
    c.hidden_width = j.at("hidden_width").get<int>();
    c.num_hidden_layers = j.at("num_hidden_layers").get<int>();
    c.norm_momentum = j.at("norm_momentum").get<double>();
    c.norm_epsilon = j.at("norm_epsilon").get<double>();
    c.head_bias_init = j.at("head_bias_init").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model: bad architecture header: ") + e.what());
  }
  c.Validate();
  return c;
}

template <typename Scalar>
io::Container ModelToContainer(const FieldModelT<Scalar>& model) {
  io::Container c;
  c.type = kModelType;
  c.version = kModelFormatVersion;
  c.meta = {{"architecture", FieldConfigToJson(model.config())},
            {"scalar", std::is_same_v<Scalar, float> ? "f32" : "f64"}};
  const auto& p = model.params();
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const auto& layer = p.layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "weight",
                                       {layer.weight.rows(), layer.weight.cols()},
                                       layer.weight.data(), layer.weight.size()));
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "bias", {layer.bias.size()},
                                       layer.bias.data(), layer.bias.size()));
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "norm_scale", {layer.scale.size()},
                                       layer.scale.data(), layer.scale.size()));
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "norm_shift", {layer.shift.size()},
                                       layer.shift.data(), layer.shift.size()));
    const auto& rm = model.running_mean()[l];
    const auto& rv = model.running_var()[l];
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "running_mean", {rm.size()},
                                       rm.data(), rm.size()));
    c.blobs.push_back(MakeBlob<Scalar>(prefix + "running_var", {rv.size()},
                                       rv.data(), rv.size()));
  }
  c.blobs.push_back(MakeBlob<Scalar>("head.weight", {p.head_weight.size()},
                                     p.head_weight.data(), p.head_weight.size()));
  c.blobs.push_back(MakeBlob<Scalar>("head.bias", {1}, &p.head_bias, 1));
  return c;
}

template <typename Scalar>
FieldModelT<Scalar> ModelFromContainer(const io::Container& c) {
  if (c.type != kModelType) {
    throw InputError("model: container type is '" + c.type + "'");
  }
  if (c.version != kModelFormatVersion) {
    throw InputError("model: unsupported format version " +
                     std::to_string(c.version));
  }
  FieldConfig config;
  try {
    config = FieldConfigFromJson(c.meta.at("architecture"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model: missing architecture: ") + e.what());
  }
  FieldModelT<Scalar> model(config, 0);
  auto& p = model.params();
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    Fill(layer.weight, BlobValues<Scalar>(c.blob(prefix + "weight"), layer.weight.size()));
    Fill(layer.bias, BlobValues<Scalar>(c.blob(prefix + "bias"), layer.bias.size()));
    Fill(layer.scale, BlobValues<Scalar>(c.blob(prefix + "norm_scale"), layer.scale.size()));
    Fill(layer.shift, BlobValues<Scalar>(c.blob(prefix + "norm_shift"), layer.shift.size()));
    Fill(model.running_mean()[l],
         BlobValues<Scalar>(c.blob(prefix + "running_mean"), layer.bias.size()));
    Fill(model.running_var()[l],
         BlobValues<Scalar>(c.blob(prefix + "running_var"), layer.bias.size()));
  }
  Fill(p.head_weight, BlobValues<Scalar>(c.blob("head.weight"), p.head_weight.size()));
  p.head_bias = BlobValues<Scalar>(c.blob("head.bias"), 1)[0];
  model.CheckFinite();
  return model;
}

void SaveModel(const FieldModel& model, const std::filesystem::path& path) {
  io::WriteContainer(ModelToContainer(model), path);
}

FieldModel LoadModel(const std::filesystem::path& path) {
  return ModelFromContainer<float>(io::ReadContainer(path, kModelType));
}

template io::Container ModelToContainer(const FieldModelT<float>&);
template io::Container ModelToContainer(const FieldModelT<double>&);
template FieldModelT<float> ModelFromContainer(const io::Container&);
template FieldModelT<double> ModelFromContainer(const io::Container&);

}  // namespace nofmcl::field
