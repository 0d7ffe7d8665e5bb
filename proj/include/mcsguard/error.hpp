/*
 * Copyright 2026 The mcsguard Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MCSGUARD_ERROR_HPP_
#define MCSGUARD_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcsguard {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (generation, GAN, classifier, CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Mismatched matrix/vector dimensions or feature widths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Input data that violates a precondition (empty set, single class, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// NaN or infinity met during a forward or backward pass. `layer()` is the
// zero-based layer index, or npos when the offending value was an input.
class NumericError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  NumericError(const std::string& what, std::size_t layer)
      : Error(what), layer_(layer) {}

  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

// GAN training produced a non-finite loss.
class TrainingDivergence : public Error {
 public:
  TrainingDivergence(const std::string& what, std::size_t epoch)
      : Error(what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

// File could not be opened, read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcsguard

#endif  // MCSGUARD_ERROR_HPP_
