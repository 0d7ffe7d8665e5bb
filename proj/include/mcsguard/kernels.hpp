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

// Arithmetic inner loops shared by the dense network and the classifiers.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// builds, an AVX2/FMA variant. The variant is chosen once at runtime from the
// CPU feature bits; setting MCSGUARD_ISA=scalar in the environment (or calling
// select()) forces the reference path. The SIMD variants reassociate sums, so
// results agree with the reference only up to rounding.

#ifndef MCSGUARD_KERNELS_HPP_
#define MCSGUARD_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

#include "mcsguard/matrix.hpp"

namespace mcsguard::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[j] = sum_i w[i] * x[j][i] for j in 0..3
  void (*dot4)(const double* w, const double* const* x, std::size_t n, double* out);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += sum_j alpha[j] * x[j] for j in 0..3
  void (*axpy4)(const double* alpha, const double* const* x, double* y, std::size_t n);
  // y[j] += alpha[j] * x for j in 0..3
  void (*scatter4)(const double* alpha, const double* x, double* const* y, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool isa_supported(Isa isa);
// Kernel table used by every wrapper below.
const KernelTable& active();
// Throws ConfigError if the ISA is not available on this build or CPU.
void select(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double squared_distance(std::span<const double> a, std::span<const double> b);

// y = x * w^T + bias, with x (rows x in), w (out x in), y (rows x out).
void dense_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y);
// dx = delta * w, with delta (rows x out), w (out x in), dx (rows x in).
void dense_backward_input(const Matrix& delta, const Matrix& w, Matrix& dx);
// dw = delta^T * x, db = column sums of delta.
void dense_backward_params(const Matrix& delta, const Matrix& x, Matrix& dw,
                           std::span<double> db);

}  // namespace mcsguard::kernels

#endif  // MCSGUARD_KERNELS_HPP_
