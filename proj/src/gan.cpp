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

#include "mcsguard/gan.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"
#include "mcsguard/random.hpp"

namespace mcsguard {

void GanConfig::validate(std::size_t train_rows) const {
  if (noise_dim == 0) throw ConfigError("noise_dim must be positive");
  if (batch_size < 2) throw ConfigError("batch_size must be at least 2");
  if (batch_size > train_rows) {
    throw ConfigError(fmt::format("batch_size {} exceeds the {} training rows", batch_size,
                                  train_rows));
  }
  if (loss_log_interval == 0) throw ConfigError("loss_log_interval must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and non-negative");
  }
  for (std::size_t h : gen_hidden) {
    if (h == 0) throw ConfigError("generator hidden sizes must be positive");
  }
  for (std::size_t h : disc_hidden) {
    if (h == 0) throw ConfigError("discriminator hidden sizes must be positive");
  }
}

GanModel make_gan(std::size_t feature_dim, const GanConfig& config) {
  if (feature_dim == 0) throw ConfigError("feature_dim must be positive");
  GanModel model;
  const auto gen_specs = chain_specs(config.noise_dim, config.gen_hidden, feature_dim,
                                     config.gen_hidden_activation, Activation::tanh);
  const auto disc_specs = chain_specs(feature_dim, config.disc_hidden, 1,
                                      config.disc_hidden_activation, Activation::sigmoid);
  model.generator =
      init_model(gen_specs, config.learning_rate, derive_seed(config.seed, "generator"));
  model.discriminator =
      init_model(disc_specs, config.learning_rate, derive_seed(config.seed, "discriminator"));
  return model;
}

namespace {

Matrix standard_normal(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

double half_loss(const Matrix& predictions, std::size_t first, std::size_t count, double target) {
  const Matrix part = predictions.slice_rows(first, count);
  return bce_loss(part, Matrix(count, 1, target));
}

struct StepLosses {
  double real = 0.0;
  double fake = 0.0;
  double gan = 0.0;
};

// Generator update through the discriminator; the discriminator is read-only.
double generator_step(MlpModel& generator, const MlpModel& discriminator, const Matrix& noise) {
  const ForwardTrace g_trace = forward(generator, noise);
  const ForwardTrace d_trace = forward(discriminator, g_trace.output());
  const Matrix targets(noise.rows(), 1, 1.0);
  const double loss = bce_loss(d_trace.output(), targets);
  const Matrix d_delta = bce_output_delta(discriminator, d_trace.output(), targets);
  const Gradients d_grads = backward(discriminator, d_trace, d_delta, /*want_input_gradient=*/true);

  // Chain through the generator's tanh head.
  Matrix g_delta = d_grads.input;
  const auto y = g_trace.output().values();
  auto d = g_delta.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= 1.0 - y[i] * y[i];
  apply_gradients(generator, backward(generator, g_trace, g_delta));
  return loss;
}

}  // namespace

GanModel train_gan(const Matrix& real_rows, const GanConfig& config) {
  if (real_rows.rows() == 0) throw DataError("GAN training needs at least one real row");
  for (double v : real_rows.values()) {
    if (!(v >= -1.0 && v <= 1.0)) throw DataError("GAN training rows must be encoded in [-1, 1]");
  }
  config.validate(real_rows.rows());

  GanModel model = make_gan(real_rows.cols(), config);
  Rng rng(derive_seed(config.seed, "training"));
  std::uniform_int_distribution<std::size_t> pick(0, real_rows.rows() - 1);
  const std::size_t real_half = config.batch_size / 2;
  const std::size_t fake_half = config.batch_size - real_half;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    StepLosses losses;
    try {
      std::vector<std::size_t> idx(real_half);
      for (auto& i : idx) i = pick(rng);
      const Matrix real = real_rows.gather_rows(idx);
      const Matrix fake =
          predict(model.generator, standard_normal(rng, fake_half, config.noise_dim));

      if (config.disc_update == DiscriminatorUpdate::separate) {
        losses.real = backward_and_step(model.discriminator, {real, Matrix(real_half, 1, 1.0)});
        losses.fake = backward_and_step(model.discriminator, {fake, Matrix(fake_half, 1, 0.0)});
      } else {
        Matrix targets(config.batch_size, 1, 0.0);
        for (std::size_t r = 0; r < real_half; ++r) targets(r, 0) = 1.0;
        const Matrix inputs = vstack(real, fake);
        const ForwardTrace trace = forward(model.discriminator, inputs);
        losses.real = half_loss(trace.output(), 0, real_half, 1.0);
        losses.fake = half_loss(trace.output(), real_half, fake_half, 0.0);
        const Matrix delta = bce_output_delta(model.discriminator, trace.output(), targets);
        apply_gradients(model.discriminator, backward(model.discriminator, trace, delta));
      }

      losses.gan = generator_step(model.generator, model.discriminator,
                                  standard_normal(rng, config.batch_size, config.noise_dim));
    } catch (const NumericError& e) {
      throw TrainingDivergence(fmt::format("GAN diverged at epoch {}: {}", epoch, e.what()), epoch);
    }
    if (!std::isfinite(losses.real) || !std::isfinite(losses.fake) || !std::isfinite(losses.gan)) {
      throw TrainingDivergence(fmt::format("GAN loss became non-finite at epoch {}", epoch), epoch);
    }
    if (epoch % config.loss_log_interval == 0) {
      model.history.push_back({epoch, losses.real, losses.fake, losses.gan});
    }
  }
  model.trained = config.epochs > 0;
  return model;
}

Matrix generate(const GanModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) return Matrix(0, model.feature_dim());
  Rng rng(seed);
  return predict(model.generator, standard_normal(rng, n, model.noise_dim()));
}

std::vector<double> discriminate(const GanModel& model, const Matrix& rows) {
  if (rows.rows() == 0) return {};
  if (rows.cols() != model.feature_dim()) {
    throw ShapeError(fmt::format("discriminator expects {} features, got {}", model.feature_dim(),
                                 rows.cols()));
  }
  const Matrix p = predict(model.discriminator, rows);
  return {p.values().begin(), p.values().end()};
}

double discriminator_accuracy(const GanModel& model, const Matrix& real, const Matrix& synthetic,
                              double threshold) {
  const std::size_t total = real.rows() + synthetic.rows();
  if (total == 0) throw DataError("accuracy on an empty probe set");
  std::size_t correct = 0;
  for (double p : discriminate(model, real)) correct += p >= threshold ? 1 : 0;
  for (double p : discriminate(model, synthetic)) correct += p < threshold ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(total);
}

void write_loss_history_csv(const std::string& path, const std::vector<LossRecord>& history) {
  std::string out = "epoch,loss_real,loss_fake,loss_gan\n";
  for (const auto& r : history) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", r.epoch, r.loss_real, r.loss_fake,
                   r.loss_gan);
  }
  write_text_file(path, out);
}

std::vector<LossRecord> read_loss_history_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "epoch,loss_real,loss_fake,loss_gan") {
    throw IoError(fmt::format("{}: unexpected loss history header", path));
  }
  auto number = [&path](std::string_view f, auto& out) {
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      throw IoError(fmt::format("{}: cannot parse '{}'", path, f));
    }
  };
  std::vector<LossRecord> history;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw IoError(fmt::format("{}: expected 4 fields", path));
    LossRecord r;
    number(f[0], r.epoch);
    number(f[1], r.loss_real);
    number(f[2], r.loss_fake);
    number(f[3], r.loss_gan);
    history.push_back(r);
  }
  return history;
}

}  // namespace mcsguard
