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

#include "mcsguard/neural.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/kernels.hpp"
#include "mcsguard/random.hpp"

namespace mcsguard {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::tanh:
      return "tanh";
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::leaky_relu:
      return "leaky_relu";
    case Activation::linear:
      return "linear";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::tanh;
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "leaky_relu") return Activation::leaky_relu;
  if (s == "linear") return Activation::linear;
  throw ConfigError(fmt::format("unknown activation '{}'", s));
}

std::size_t MlpModel::input_dim() const { return layers.empty() ? 0 : layers.front().spec.input_dim; }

std::size_t MlpModel::output_dim() const {
  return layers.empty() ? 0 : layers.back().spec.output_dim;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<LayerSpec> MlpModel::specs() const {
  std::vector<LayerSpec> out;
  out.reserve(layers.size());
  for (const auto& l : layers) out.push_back(l.spec);
  return out;
}

bool MlpModel::all_finite() const {
  for (const auto& l : layers) {
    if (!l.weights.all_finite()) return false;
    for (double b : l.bias) {
      if (!std::isfinite(b)) return false;
    }
  }
  return true;
}

void validate_specs(std::span<const LayerSpec> specs) {
  if (specs.empty()) throw ConfigError("a model needs at least one layer");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].input_dim == 0 || specs[i].output_dim == 0) {
      throw ConfigError(fmt::format("layer {} has a zero dimension", i));
    }
    if (i > 0 && specs[i].input_dim != specs[i - 1].output_dim) {
      throw ConfigError(fmt::format("layer {} expects {} inputs but layer {} produces {}", i,
                                    specs[i].input_dim, i - 1, specs[i - 1].output_dim));
    }
  }
}

std::vector<LayerSpec> chain_specs(std::size_t input_dim, std::span<const std::size_t> hidden,
                                   std::size_t output_dim, Activation hidden_activation,
                                   Activation head_activation) {
  std::vector<LayerSpec> specs;
  std::size_t in = input_dim;
  for (std::size_t h : hidden) {
    specs.push_back({in, h, hidden_activation});
    in = h;
  }
  specs.push_back({in, output_dim, head_activation});
  return specs;
}

MlpModel init_model(std::span<const LayerSpec> specs, double learning_rate, std::uint64_t seed) {
  validate_specs(specs);
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw ConfigError("learning rate must be finite and non-negative");
  }
  Rng rng(seed);
  MlpModel model;
  model.learning_rate = learning_rate;
  for (const auto& s : specs) {
    DenseLayer layer{s, Matrix(s.output_dim, s.input_dim), std::vector<double>(s.output_dim, 0.0)};
    const double scale = std::sqrt(1.0 / static_cast<double>(s.input_dim));
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (double& w : layer.weights.values()) w = dist(rng);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

namespace {

void activate(Activation a, std::span<double> v) {
  switch (a) {
    case Activation::tanh:
      for (double& x : v) x = std::tanh(x);
      break;
    case Activation::sigmoid:
      for (double& x : v) x = 1.0 / (1.0 + std::exp(-x));
      break;
    case Activation::leaky_relu:
      for (double& x : v) x = x > 0.0 ? x : kLeakySlope * x;
      break;
    case Activation::linear:
      break;
  }
}

// Derivative expressed through the activation's output y.
inline double derivative_from_output(Activation a, double y) {
  switch (a) {
    case Activation::tanh:
      return 1.0 - y * y;
    case Activation::sigmoid:
      return y * (1.0 - y);
    case Activation::leaky_relu:
      return y > 0.0 ? 1.0 : kLeakySlope;
    case Activation::linear:
      return 1.0;
  }
  return 1.0;
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(fmt::format("{}: shape {}x{} != {}x{}", what, a.rows(), a.cols(), b.rows(),
                                 b.cols()));
  }
}

}  // namespace

ForwardTrace forward(const MlpModel& model, const Matrix& inputs) {
  if (model.layers.empty()) throw ConfigError("forward on an empty model");
  if (inputs.cols() != model.input_dim()) {
    throw ShapeError(fmt::format("model expects {} inputs, got {}", model.input_dim(), inputs.cols()));
  }
  if (!inputs.all_finite()) throw NumericError("non-finite model input", NumericError::npos);
  ForwardTrace trace;
  trace.activations.reserve(model.layers.size() + 1);
  trace.activations.push_back(inputs);
  for (const auto& layer : model.layers) {
    Matrix out;
    kernels::dense_forward(trace.activations.back(), layer.weights, layer.bias, out);
    activate(layer.spec.activation, out.values());
    trace.activations.push_back(std::move(out));
  }
  return trace;
}

Matrix predict(const MlpModel& model, const Matrix& inputs) {
  ForwardTrace trace = forward(model, inputs);
  return std::move(trace.activations.back());
}

double bce_loss(const Matrix& predictions, const Matrix& targets) {
  check_same_shape(predictions, targets, "bce_loss");
  if (predictions.empty()) throw ShapeError("bce_loss on an empty batch");
  const auto p = predictions.values();
  const auto t = targets.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kBceEpsilon, 1.0 - kBceEpsilon);
    sum -= t[i] * std::log(q) + (1.0 - t[i]) * std::log(1.0 - q);
  }
  return sum / static_cast<double>(p.size());
}

Matrix bce_output_delta(const MlpModel& model, const Matrix& predictions, const Matrix& targets) {
  check_same_shape(predictions, targets, "bce_output_delta");
  const Activation head = model.layers.back().spec.activation;
  const double inv_n = 1.0 / static_cast<double>(predictions.size());
  Matrix delta(predictions.rows(), predictions.cols());
  const auto p = predictions.values();
  const auto t = targets.values();
  auto d = delta.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (head == Activation::sigmoid) {
      // dL/dp * sigma'(z) collapses to p - t.
      d[i] = (p[i] - t[i]) * inv_n;
    } else if (p[i] <= kBceEpsilon || p[i] >= 1.0 - kBceEpsilon) {
      d[i] = 0.0;  // clamped region is flat
    } else {
      const double dl_dp = (p[i] - t[i]) / (p[i] * (1.0 - p[i]));
      d[i] = dl_dp * derivative_from_output(head, p[i]) * inv_n;
    }
  }
  return delta;
}

Gradients backward(const MlpModel& model, const ForwardTrace& trace, const Matrix& output_delta,
                   bool want_input_gradient) {
  const std::size_t n_layers = model.layers.size();
  if (trace.activations.size() != n_layers + 1) {
    throw ShapeError("forward trace does not match the model depth");
  }
  check_same_shape(output_delta, trace.output(), "backward output delta");
  Gradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  Matrix delta = output_delta;
  Matrix upstream;
  for (std::size_t li = n_layers; li-- > 0;) {
    const DenseLayer& layer = model.layers[li];
    const Matrix& layer_input = trace.activations[li];
    g.biases[li].assign(layer.spec.output_dim, 0.0);
    kernels::dense_backward_params(delta, layer_input, g.weights[li], g.biases[li]);
    if (!g.weights[li].all_finite() ||
        !std::all_of(g.biases[li].begin(), g.biases[li].end(),
                     [](double v) { return std::isfinite(v); })) {
      throw NumericError(fmt::format("non-finite gradient in layer {}", li), li);
    }
    if (li == 0 && !want_input_gradient) break;
    kernels::dense_backward_input(delta, layer.weights, upstream);
    if (li == 0) {
      g.input = std::move(upstream);
      break;
    }
    const Activation prev = model.layers[li - 1].spec.activation;
    auto u = upstream.values();
    const auto y = layer_input.values();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= derivative_from_output(prev, y[i]);
    std::swap(delta, upstream);
  }
  return g;
}

void apply_gradients(MlpModel& model, const Gradients& grads) {
  if (grads.weights.size() != model.layers.size()) {
    throw ShapeError("gradient set does not match the model depth");
  }
  const double step = -model.learning_rate;
  if (step == 0.0) return;
  for (std::size_t li = 0; li < model.layers.size(); ++li) {
    DenseLayer& layer = model.layers[li];
    kernels::axpy(step, grads.weights[li].values(), layer.weights.values());
    kernels::axpy(step, grads.biases[li], layer.bias);
  }
}

double backward_and_step(MlpModel& model, const TrainBatch& batch) {
  if (batch.inputs.rows() != batch.targets.rows()) {
    throw ShapeError(fmt::format("batch has {} inputs but {} targets", batch.inputs.rows(),
                                 batch.targets.rows()));
  }
  if (!batch.targets.all_finite()) throw NumericError("non-finite target", NumericError::npos);
  const ForwardTrace trace = forward(model, batch.inputs);
  const double loss = bce_loss(trace.output(), batch.targets);
  const Matrix delta = bce_output_delta(model, trace.output(), batch.targets);
  const Gradients grads = backward(model, trace, delta);
  apply_gradients(model, grads);
  return loss;
}

}  // namespace mcsguard
