/*
 * Copyright 2026 The ACGCL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace acgcl {

// Base of every error raised by the library. `kind()` is the stable class name
// that the CLI prints as a machine-parseable prefix.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ACGCL_DEFINE_ERROR(Name)                                         \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

ACGCL_DEFINE_ERROR(ParseError)
ACGCL_DEFINE_ERROR(IndexError)
ACGCL_DEFINE_ERROR(ShapeError)
ACGCL_DEFINE_ERROR(SizeError)
ACGCL_DEFINE_ERROR(RangeError)
ACGCL_DEFINE_ERROR(ConfigError)
ACGCL_DEFINE_ERROR(ConvergenceError)
ACGCL_DEFINE_ERROR(ContractError)
ACGCL_DEFINE_ERROR(IoError)
ACGCL_DEFINE_ERROR(NumericError)
ACGCL_DEFINE_ERROR(EmptyDistributionError)

#undef ACGCL_DEFINE_ERROR

// "ShapeError: what" -- the single-line form used by the CLI.
std::string describe(const std::exception& e);

}  // namespace acgcl
