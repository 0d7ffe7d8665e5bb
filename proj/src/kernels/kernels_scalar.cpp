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

// Reference kernels. Plain left-to-right loops; these define the semantics
// the SIMD variants are tested against.

#include "mcsguard/kernels.hpp"

namespace mcsguard::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void dot4_scalar(const double* w, const double* const* x, std::size_t n, double* out) {
  for (int j = 0; j < 4; ++j) out[j] = dot_scalar(w, x[j], n);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy4_scalar(const double* alpha, const double* const* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha[0] * x[0][i] + alpha[1] * x[1][i] + alpha[2] * x[2][i] + alpha[3] * x[3][i];
  }
}

void scatter4_scalar(const double* alpha, const double* x, double* const* y, std::size_t n) {
  for (int j = 0; j < 4; ++j) axpy_scalar(alpha[j], x, y[j], n);
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kScalar{
    Isa::scalar,  dot_scalar,      dot4_scalar, axpy_scalar, axpy4_scalar,
    scatter4_scalar, squared_distance_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace mcsguard::kernels
