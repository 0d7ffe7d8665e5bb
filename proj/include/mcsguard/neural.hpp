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

// Dense multilayer perceptron with binary cross-entropy and plain minibatch
// SGD. Gradients are averaged over the batch, so the learning rate does not
// depend on batch size.

#ifndef MCSGUARD_NEURAL_HPP_
#define MCSGUARD_NEURAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcsguard/matrix.hpp"

namespace mcsguard {

enum class Activation { tanh, sigmoid, leaky_relu, linear };

// Negative-side slope of leaky_relu.
inline constexpr double kLeakySlope = 0.2;
// Predictions are clamped to [eps, 1 - eps] before taking logs.
inline constexpr double kBceEpsilon = 1e-7;

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

struct LayerSpec {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  Activation activation = Activation::linear;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct DenseLayer {
  LayerSpec spec;
  Matrix weights;             // output_dim x input_dim
  std::vector<double> bias;   // output_dim

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpModel {
  std::vector<DenseLayer> layers;
  double learning_rate = 0.01;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;
  std::vector<LayerSpec> specs() const;
  bool all_finite() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

// Throws ConfigError for an empty list, zero dims or broken chaining.
void validate_specs(std::span<const LayerSpec> specs);

// `hidden` activation on every hidden layer, `head` on the last one.
std::vector<LayerSpec> chain_specs(std::size_t input_dim, std::span<const std::size_t> hidden,
                                   std::size_t output_dim, Activation hidden_activation,
                                   Activation head_activation);

// Weights uniform in [-s, s] with s = sqrt(1 / input_dim); zero biases.
MlpModel init_model(std::span<const LayerSpec> specs, double learning_rate, std::uint64_t seed);

// activations[0] is the input, activations[i + 1] the output of layer i.
struct ForwardTrace {
  std::vector<Matrix> activations;
  const Matrix& output() const { return activations.back(); }
};

// Throws ShapeError on a width mismatch and NumericError on non-finite input.
ForwardTrace forward(const MlpModel& model, const Matrix& inputs);
Matrix predict(const MlpModel& model, const Matrix& inputs);

// Mean of -[t ln p + (1 - t) ln(1 - p)] over every entry.
double bce_loss(const Matrix& predictions, const Matrix& targets);

// Gradient of bce_loss with respect to the last layer's pre-activation.
Matrix bce_output_delta(const MlpModel& model, const Matrix& predictions, const Matrix& targets);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  Matrix input;  // filled only when requested
};

// Backpropagates `output_delta` (dLoss/d pre-activation of the last layer).
// Throws NumericError carrying the layer index on a non-finite gradient.
Gradients backward(const MlpModel& model, const ForwardTrace& trace, const Matrix& output_delta,
                   bool want_input_gradient = false);

// params -= learning_rate * gradient
void apply_gradients(MlpModel& model, const Gradients& grads);

struct TrainBatch {
  Matrix inputs;   // batch x input_dim
  Matrix targets;  // batch x output_dim
};

// One SGD step on the BCE loss. Returns the loss before the update.
double backward_and_step(MlpModel& model, const TrainBatch& batch);

// Binary checkpoint: magic, version, learning rate, layer specs and the
// flattened parameters as little-endian doubles.
void save_model(const std::string& path, const MlpModel& model);
MlpModel load_model(const std::string& path);

// "epoch,loss" per line after a header.
void write_loss_log(const std::string& path,
                    std::span<const std::pair<std::size_t, double>> entries);

}  // namespace mcsguard

#endif  // MCSGUARD_NEURAL_HPP_
