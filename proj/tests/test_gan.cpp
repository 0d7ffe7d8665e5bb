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

#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "mcsguard/error.hpp"
#include "mcsguard/gan.hpp"

using namespace mcsguard;

namespace {

GanConfig small_config() {
  GanConfig c;
  c.noise_dim = 8;
  c.gen_hidden = {16, 16};
  c.disc_hidden = {16, 8};
  c.batch_size = 8;
  c.epochs = 55;
  c.seed = 4;
  return c;
}

Matrix real_rows(std::size_t n, std::size_t d) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.9);
  Matrix m(n, d);
  for (double& v : m.values()) v = u(rng);
  return m;
}

}  // namespace

TEST_CASE("default architecture") {
  const GanModel g = make_gan(11, GanConfig{});
  CHECK(g.noise_dim() == 100);
  CHECK(g.feature_dim() == 11);
  const auto gs = g.generator.specs();
  REQUIRE(gs.size() == 4);
  CHECK(gs[0].output_dim == 256);
  CHECK(gs[1].output_dim == 512);
  CHECK(gs[2].output_dim == 1024);
  CHECK(gs[3].output_dim == 11);
  CHECK(gs[3].activation == Activation::tanh);
  const auto ds = g.discriminator.specs();
  REQUIRE(ds.size() == 4);
  CHECK(ds[0].output_dim == 512);
  CHECK(ds[1].output_dim == 256);
  CHECK(ds[2].output_dim == 256);
  CHECK(ds[3].output_dim == 1);
  CHECK(ds[3].activation == Activation::sigmoid);
  CHECK(!g.trained);
}

TEST_CASE("training records history and is deterministic") {
  const Matrix real = real_rows(40, 5);
  const GanModel a = train_gan(real, small_config());
  CHECK(a.trained);
  REQUIRE(a.history.size() == 6);  // epochs 0, 10, ..., 50
  CHECK(a.history[1].epoch == 10);
  for (const auto& h : a.history) {
    CHECK(h.loss_real > 0.0);
    CHECK(h.loss_fake > 0.0);
    CHECK(h.loss_gan > 0.0);
  }
  const GanModel b = train_gan(real, small_config());
  CHECK(a.generator == b.generator);
  CHECK(a.discriminator == b.discriminator);
  CHECK(a.history == b.history);

  GanConfig joint = small_config();
  joint.disc_update = DiscriminatorUpdate::joint;
  CHECK(!(train_gan(real, joint).discriminator == a.discriminator));
}

TEST_CASE("generation and discrimination") {
  const GanModel g = train_gan(real_rows(40, 5), small_config());
  const Matrix x = generate(g, 25, 9);
  CHECK(x.rows() == 25);
  CHECK(x.cols() == 5);
  for (double v : x.values()) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK(generate(g, 25, 9) == x);
  CHECK(!(generate(g, 25, 10) == x));
  const Matrix none = generate(g, 0, 9);
  CHECK(none.rows() == 0);
  CHECK(none.cols() == 5);
  for (double p : discriminate(g, x)) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  CHECK_THROWS_AS(discriminate(g, Matrix(2, 4)), ShapeError);
  const double acc = discriminator_accuracy(g, real_rows(10, 5), x);
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
}

TEST_CASE("zero epochs leaves an untrained pair") {
  GanConfig c = small_config();
  c.epochs = 0;
  const GanModel g = train_gan(real_rows(20, 3), c);
  CHECK(!g.trained);
  CHECK(g.history.empty());
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(train_gan(Matrix(0, 3), small_config()), DataError);
  Matrix out_of_range = real_rows(20, 3);
  out_of_range(3, 1) = 1.5;
  CHECK_THROWS_AS(train_gan(out_of_range, small_config()), DataError);
  GanConfig c = small_config();
  c.batch_size = 50;
  CHECK_THROWS_AS(train_gan(real_rows(20, 3), c), ConfigError);
  c = small_config();
  c.loss_log_interval = 0;
  CHECK_THROWS_AS(train_gan(real_rows(20, 3), c), ConfigError);
}

TEST_CASE("divergence is reported with its epoch") {
  GanConfig c = small_config();
  c.learning_rate = 1e300;
  try {
    train_gan(real_rows(20, 3), c);
    FAIL("expected divergence");
  } catch (const TrainingDivergence& e) {
    CHECK(e.epoch() < c.epochs);
  }
}

TEST_CASE("loss history csv round-trips") {
  const GanModel g = train_gan(real_rows(40, 5), small_config());
  const auto path = (std::filesystem::temp_directory_path() / "mcsguard_loss_rt.csv").string();
  write_loss_history_csv(path, g.history);
  CHECK(read_loss_history_csv(path) == g.history);
  std::remove(path.c_str());
}
