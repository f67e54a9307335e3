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

#ifndef NOFMCL_CORE_ERROR_H_
#define NOFMCL_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace nofmcl {

// Values double as process exit codes for the command-line tool.
enum class ErrorCode : int {
  kUsage = 1,
  kInput = 2,
  kNumeric = 3,
  kLocalizationFailed = 4,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorCode::kInput, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorCode::kNumeric, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorCode::kUsage, what) {}
};

}  // namespace nofmcl

#endif  // NOFMCL_CORE_ERROR_H_
