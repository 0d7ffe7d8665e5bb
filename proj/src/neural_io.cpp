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

#include <bit>
#include <cstring>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"
#include "mcsguard/neural.hpp"

namespace mcsguard {
namespace {

constexpr char kMagic[8] = {'M', 'C', 'S', 'G', 'M', 'L', 'P', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; add byte swapping for this target");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) {
      throw IoError(fmt::format("{}: truncated checkpoint", path_));
    }
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  void expect_magic() {
    if (data_.size() < sizeof(kMagic) || std::memcmp(data_.data(), kMagic, sizeof(kMagic)) != 0) {
      throw IoError(fmt::format("{}: not an mcsguard model checkpoint", path_));
    }
    pos_ = sizeof(kMagic);
  }

  bool at_end() const { return pos_ == data_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_model(const std::string& path, const MlpModel& model) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<double>(out, model.learning_rate);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& l : model.layers) {
    put<std::uint64_t>(out, l.spec.input_dim);
    put<std::uint64_t>(out, l.spec.output_dim);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(l.spec.activation));
  }
  for (const auto& l : model.layers) {
    for (double w : l.weights.values()) put<double>(out, w);
    for (double b : l.bias) put<double>(out, b);
  }
  write_text_file(path, out);
}

MlpModel load_model(const std::string& path) {
  Reader in(read_text_file(path), path);
  in.expect_magic();
  const auto version = in.get<std::uint32_t>();
  if (version != kVersion) {
    throw IoError(fmt::format("{}: unsupported checkpoint version {}", path, version));
  }
  MlpModel model;
  model.learning_rate = in.get<double>();
  const auto n_layers = in.get<std::uint32_t>();
  std::vector<LayerSpec> specs;
  for (std::uint32_t i = 0; i < n_layers; ++i) {
    LayerSpec s;
    s.input_dim = in.get<std::uint64_t>();
    s.output_dim = in.get<std::uint64_t>();
    const auto act = in.get<std::uint8_t>();
    if (act > static_cast<std::uint8_t>(Activation::linear)) {
      throw IoError(fmt::format("{}: bad activation code {}", path, act));
    }
    s.activation = static_cast<Activation>(act);
    specs.push_back(s);
  }
  try {
    validate_specs(specs);
  } catch (const ConfigError& e) {
    throw IoError(fmt::format("{}: {}", path, e.what()));
  }
  for (const auto& s : specs) {
    DenseLayer layer{s, Matrix(s.output_dim, s.input_dim), std::vector<double>(s.output_dim)};
    for (double& w : layer.weights.values()) w = in.get<double>();
    for (double& b : layer.bias) b = in.get<double>();
    model.layers.push_back(std::move(layer));
  }
  if (!in.at_end()) throw IoError(fmt::format("{}: trailing bytes after parameters", path));
  return model;
}

void write_loss_log(const std::string& path,
                    std::span<const std::pair<std::size_t, double>> entries) {
  std::string out = "epoch,loss\n";
  for (const auto& [epoch, loss] : entries) {
    fmt::format_to(std::back_inserter(out), "{},{}\n", epoch, loss);
  }
  write_text_file(path, out);
}

}  // namespace mcsguard
