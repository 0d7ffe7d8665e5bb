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

// Generator/discriminator pair over encoded task rows.
//
// One training epoch draws one minibatch: the discriminator is updated on a
// half-batch of real rows (target 1) and a half-batch of generator output
// (target 0), then the generator is updated through the frozen discriminator
// with target 1.

#ifndef MCSGUARD_GAN_HPP_
#define MCSGUARD_GAN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mcsguard/matrix.hpp"
#include "mcsguard/neural.hpp"

namespace mcsguard {

enum class DiscriminatorUpdate {
  separate,  // one SGD step on the real half, then one on the generated half
  joint,     // one SGD step on the concatenated batch
};

struct GanConfig {
  std::size_t noise_dim = 100;
  std::vector<std::size_t> gen_hidden = {256, 512, 1024};
  std::vector<std::size_t> disc_hidden = {512, 256, 256};
  Activation gen_hidden_activation = Activation::leaky_relu;
  Activation disc_hidden_activation = Activation::leaky_relu;
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 2000;
  std::size_t loss_log_interval = 10;
  DiscriminatorUpdate disc_update = DiscriminatorUpdate::separate;
  std::uint64_t seed = 1;

  // Throws ConfigError; `train_rows` is the size of the real corpus.
  void validate(std::size_t train_rows) const;
};

struct LossRecord {
  std::size_t epoch = 0;
  double loss_real = 0.0;  // discriminator BCE on real rows
  double loss_fake = 0.0;  // discriminator BCE on generated rows
  double loss_gan = 0.0;   // generator BCE against target 1

  friend bool operator==(const LossRecord&, const LossRecord&) = default;
};

struct GanModel {
  MlpModel generator;      // noise -> ... -> feature_dim, tanh head
  MlpModel discriminator;  // feature_dim -> ... -> 1, sigmoid head
  std::vector<LossRecord> history;
  bool trained = false;

  std::size_t noise_dim() const { return generator.input_dim(); }
  std::size_t feature_dim() const { return discriminator.input_dim(); }
};

// Freshly initialised, untrained pair.
GanModel make_gan(std::size_t feature_dim, const GanConfig& config);

// Rows must be non-empty and inside [-1, 1]. History holds one record every
// loss_log_interval epochs starting at epoch 0. Throws TrainingDivergence on
// a non-finite loss or gradient.
GanModel train_gan(const Matrix& real_rows, const GanConfig& config);

// n rows of generator output from standard-normal noise; deterministic per seed.
Matrix generate(const GanModel& model, std::size_t n, std::uint64_t seed);

// Per-row probability of being real. Throws ShapeError on a width mismatch.
std::vector<double> discriminate(const GanModel& model, const Matrix& rows);

// Fraction of rows the discriminator gets right at `threshold`: real rows
// should score >= threshold, synthetic rows below it.
double discriminator_accuracy(const GanModel& model, const Matrix& real, const Matrix& synthetic,
                              double threshold = 0.5);

// "epoch,loss_real,loss_fake,loss_gan"
void write_loss_history_csv(const std::string& path, const std::vector<LossRecord>& history);
std::vector<LossRecord> read_loss_history_csv(const std::string& path);

}  // namespace mcsguard

#endif  // MCSGUARD_GAN_HPP_
