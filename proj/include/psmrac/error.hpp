/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

#include <stdexcept>
#include <string>

namespace psmrac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent matrix or polynomial dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition does not hold (pole evaluation, singular data,
/// failed placement, zero polynomial...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// One of the plant/design assumptions needed by the control scheme fails.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario, matrix or parameter file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Closed-loop signals left the admissible range.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace psmrac
