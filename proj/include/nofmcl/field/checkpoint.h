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

#ifndef NOFMCL_FIELD_CHECKPOINT_H_
#define NOFMCL_FIELD_CHECKPOINT_H_

#include <filesystem>

#include "json.hpp"
#include "nofmcl/field/field_model.h"
#include "nofmcl/io/container.h"

namespace nofmcl::field {

inline constexpr const char* kModelType = "nofmcl.field_model";
inline constexpr int kModelFormatVersion = 1;

nlohmann::json FieldConfigToJson(const FieldConfig& config);
FieldConfig FieldConfigFromJson(const nlohmann::json& j);

template <typename Scalar>
io::Container ModelToContainer(const FieldModelT<Scalar>& model);

// Accepts either payload precision and converts to Scalar.
template <typename Scalar>
FieldModelT<Scalar> ModelFromContainer(const io::Container& container);

void SaveModel(const FieldModel& model, const std::filesystem::path& path);
FieldModel LoadModel(const std::filesystem::path& path);

}  // namespace nofmcl::field

#endif  // NOFMCL_FIELD_CHECKPOINT_H_
