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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/kernels.hpp"

namespace mcsguard::kernels {

#ifndef MCSGUARD_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MCSGUARD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable* initial_table() {
  if (const char* env = std::getenv("MCSGUARD_ISA")) {
    if (std::string(env) == "scalar") return &scalar_table();
  }
  if (isa_supported(Isa::avx2)) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(fmt::format("{}: length {} != {}", what, a, b));
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!isa_supported(isa)) {
    throw ConfigError(fmt::format("kernel ISA '{}' is not available", isa_name(isa)));
  }
  current().store(isa == Isa::avx2 ? avx2_table() : &scalar_table(), std::memory_order_relaxed);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size(), "axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size(), "squared_distance");
  return active().squared_distance(a.data(), b.data(), a.size());
}

void dense_forward(const Matrix& x, const Matrix& w, std::span<const double> bias, Matrix& y) {
  const std::size_t rows = x.rows();
  const std::size_t in = x.cols();
  const std::size_t out = w.rows();
  check_same_size(w.cols(), in, "dense_forward weights");
  check_same_size(bias.size(), out, "dense_forward bias");
  if (y.rows() != rows || y.cols() != out) y = Matrix(rows, out);
  const KernelTable& k = active();
  const std::size_t blocked = rows - rows % 4;
  for (std::size_t o = 0; o < out; ++o) {
    const double* wr = w.row(o).data();
    for (std::size_t r = 0; r < blocked; r += 4) {
      const double* xs[4] = {x.row(r).data(), x.row(r + 1).data(), x.row(r + 2).data(),
                             x.row(r + 3).data()};
      double s[4];
      k.dot4(wr, xs, in, s);
      for (int j = 0; j < 4; ++j) y(r + j, o) = s[j] + bias[o];
    }
    for (std::size_t r = blocked; r < rows; ++r) y(r, o) = k.dot(wr, x.row(r).data(), in) + bias[o];
  }
}

void dense_backward_input(const Matrix& delta, const Matrix& w, Matrix& dx) {
  const std::size_t rows = delta.rows();
  const std::size_t out = delta.cols();
  const std::size_t in = w.cols();
  check_same_size(w.rows(), out, "dense_backward_input");
  if (dx.rows() != rows || dx.cols() != in) {
    dx = Matrix(rows, in);
  } else {
    dx.fill(0.0);
  }
  const KernelTable& k = active();
  const std::size_t blocked = rows - rows % 4;
  for (std::size_t o = 0; o < out; ++o) {
    const double* wr = w.row(o).data();
    for (std::size_t r = 0; r < blocked; r += 4) {
      const double alpha[4] = {delta(r, o), delta(r + 1, o), delta(r + 2, o), delta(r + 3, o)};
      double* ys[4] = {dx.row(r).data(), dx.row(r + 1).data(), dx.row(r + 2).data(),
                       dx.row(r + 3).data()};
      k.scatter4(alpha, wr, ys, in);
    }
    for (std::size_t r = blocked; r < rows; ++r) k.axpy(delta(r, o), wr, dx.row(r).data(), in);
  }
}

void dense_backward_params(const Matrix& delta, const Matrix& x, Matrix& dw,
                           std::span<double> db) {
  const std::size_t rows = delta.rows();
  const std::size_t out = delta.cols();
  const std::size_t in = x.cols();
  check_same_size(x.rows(), rows, "dense_backward_params rows");
  check_same_size(db.size(), out, "dense_backward_params bias");
  if (dw.rows() != out || dw.cols() != in) {
    dw = Matrix(out, in);
  } else {
    dw.fill(0.0);
  }
  std::fill(db.begin(), db.end(), 0.0);
  const KernelTable& k = active();
  const std::size_t blocked = rows - rows % 4;
  for (std::size_t o = 0; o < out; ++o) {
    double* dwr = dw.row(o).data();
    double bsum = 0.0;
    for (std::size_t r = 0; r < blocked; r += 4) {
      const double alpha[4] = {delta(r, o), delta(r + 1, o), delta(r + 2, o), delta(r + 3, o)};
      const double* xs[4] = {x.row(r).data(), x.row(r + 1).data(), x.row(r + 2).data(),
                             x.row(r + 3).data()};
      k.axpy4(alpha, xs, dwr, in);
      bsum += alpha[0] + alpha[1] + alpha[2] + alpha[3];
    }
    for (std::size_t r = blocked; r < rows; ++r) {
      k.axpy(delta(r, o), x.row(r).data(), dwr, in);
      bsum += delta(r, o);
    }
    db[o] = bsum;
  }
}

}  // namespace mcsguard::kernels
