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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mcsguard/error.hpp"
#include "mcsguard/kernels.hpp"

using namespace mcsguard;
namespace k = mcsguard::kernels;

namespace {

std::vector<double> noise(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

Matrix noise(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& x : m.values()) x = u(rng);
  return m;
}

// Reassociated sums differ by rounding only.
void close(double a, double b, double scale) { CHECK(std::abs(a - b) <= 1e-12 * (1.0 + scale)); }

struct IsaGuard {
  ~IsaGuard() { k::select(k::isa_supported(k::Isa::avx2) ? k::Isa::avx2 : k::Isa::scalar); }
};

}  // namespace

TEST_CASE("scalar kernels match plain loops") {
  const auto& s = k::scalar_table();
  std::vector<double> a = {1, 2, 3}, b = {4, -5, 6};
  CHECK(s.dot(a.data(), b.data(), 3) == 12.0);
  CHECK(s.squared_distance(a.data(), b.data(), 3) == 9.0 + 49.0 + 9.0);
  std::vector<double> y = {1, 1, 1};
  s.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  CHECK(s.dot(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::isa_supported(k::Isa::avx2)) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  const auto& s = k::scalar_table();
  const auto& v = *k::avx2_table();
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n < 70; ++n) {
    const auto a = noise(rng, n), b = noise(rng, n);
    const double scale = static_cast<double>(n) * 4.0;
    close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), scale);
    close(s.squared_distance(a.data(), b.data(), n), v.squared_distance(a.data(), b.data(), n),
          scale * 4.0);

    std::vector<double> x[4] = {noise(rng, n), noise(rng, n), noise(rng, n), noise(rng, n)};
    const double* xp[4] = {x[0].data(), x[1].data(), x[2].data(), x[3].data()};
    double o1[4], o2[4];
    s.dot4(a.data(), xp, n, o1);
    v.dot4(a.data(), xp, n, o2);
    for (int j = 0; j < 4; ++j) close(o1[j], o2[j], scale);

    const double alpha[4] = {0.5, -1.25, 2.0, 0.1};
    auto y1 = b, y2 = b;
    s.axpy(alpha[1], a.data(), y1.data(), n);
    v.axpy(alpha[1], a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) close(y1[i], y2[i], 4.0);
    s.axpy4(alpha, xp, y1.data(), n);
    v.axpy4(alpha, xp, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) close(y1[i], y2[i], 16.0);

    std::vector<double> z1[4] = {b, a, b, a}, z2[4] = {b, a, b, a};
    double* zp1[4] = {z1[0].data(), z1[1].data(), z1[2].data(), z1[3].data()};
    double* zp2[4] = {z2[0].data(), z2[1].data(), z2[2].data(), z2[3].data()};
    s.scatter4(alpha, a.data(), zp1, n);
    v.scatter4(alpha, a.data(), zp2, n);
    for (int j = 0; j < 4; ++j) {
      for (std::size_t i = 0; i < n; ++i) close(z1[j][i], z2[j][i], 4.0);
    }
  }
}

TEST_CASE("dense helpers agree across ISAs and with a naive product") {
  IsaGuard guard;
  std::mt19937_64 rng(11);
  const int shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {9, 13, 6}, {32, 11, 17}};
  for (const auto& shape : shapes) {
    const int rows = shape[0], in = shape[1], out = shape[2];
    const Matrix x = noise(rng, rows, in), w = noise(rng, out, in), delta = noise(rng, rows, out);
    const auto bias = noise(rng, out);

    Matrix ref_y(rows, out), ref_dx(rows, in), ref_dw(out, in);
    std::vector<double> ref_db(out, 0.0);
    for (int r = 0; r < rows; ++r) {
      for (int o = 0; o < out; ++o) {
        double acc = bias[o];
        for (int i = 0; i < in; ++i) acc += x(r, i) * w(o, i);
        ref_y(r, o) = acc;
        ref_db[o] += delta(r, o);
        for (int i = 0; i < in; ++i) {
          ref_dx(r, i) += delta(r, o) * w(o, i);
          ref_dw(o, i) += delta(r, o) * x(r, i);
        }
      }
    }

    for (k::Isa isa : {k::Isa::scalar, k::Isa::avx2}) {
      if (!k::isa_supported(isa)) continue;
      k::select(isa);
      CAPTURE(k::isa_name(isa));
      Matrix y(rows, out), dx(rows, in), dw(out, in);
      std::vector<double> db(out);
      k::dense_forward(x, w, bias, y);
      k::dense_backward_input(delta, w, dx);
      k::dense_backward_params(delta, x, dw, db);
      for (std::size_t i = 0; i < y.size(); ++i) close(y.values()[i], ref_y.values()[i], in);
      for (std::size_t i = 0; i < dx.size(); ++i) close(dx.values()[i], ref_dx.values()[i], out);
      for (std::size_t i = 0; i < dw.size(); ++i) close(dw.values()[i], ref_dw.values()[i], rows);
      for (int o = 0; o < out; ++o) close(db[o], ref_db[o], rows);
    }
  }
}

TEST_CASE("isa selection") {
  IsaGuard guard;
  k::select(k::Isa::scalar);
  CHECK(k::active().isa == k::Isa::scalar);
  if (!k::isa_supported(k::Isa::avx2)) {
    CHECK_THROWS_AS(k::select(k::Isa::avx2), ConfigError);
  } else {
    k::select(k::Isa::avx2);
    CHECK(k::active().isa == k::Isa::avx2);
  }
}
