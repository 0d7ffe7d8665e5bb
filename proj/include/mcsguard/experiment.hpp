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

// End-to-end runs: task synthesis, per-round GAN training, cascade and flat
// evaluation for each classifier, and the averaged report.
//
// The task population and its train/test split are drawn once. Round r
// (0-based) trains its GAN with seed + r and draws its synthetic rows from
// the same round seed, so any single round can be replayed on its own.
//
// Output layout under output_dir:
//   dataset.csv, scaler.json            tasks and the train-fitted scaler
//   classifier_<clf>.json               fitted baseline classifiers
//   round_XX/generator.bin, discriminator.bin, gan_loss.csv
//   round_XX/verdicts_<clf>_<arch>.csv  per-round verdicts
//   round_XX/FAILED                     present when training diverged
//   gan_loss.csv, verdicts_<clf>_<arch>.csv   all rounds, leading round column
//   report.json, report.csv, report_<clf>_<arch>.csv

#ifndef MCSGUARD_EXPERIMENT_HPP_
#define MCSGUARD_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mcsguard/classifiers.hpp"
#include "mcsguard/gan.hpp"
#include "mcsguard/metrics.hpp"
#include "mcsguard/tasks.hpp"

namespace mcsguard {

enum class Mode { full, datagen_only, train_only, eval_only, sweep };
std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

enum class Preset { paper, desk };
Preset preset_from_string(std::string_view s);

// Which training rows the GAN learns from.
enum class GanCorpus {
  train_all,    // every training row, legitimate and fake
  train_fakes,  // fake training rows only
};
std::string_view to_string(GanCorpus c);
GanCorpus gan_corpus_from_string(std::string_view s);

struct SweepConfig {
  std::vector<std::size_t> batch_sizes = {15, 20, 25, 32};
  std::vector<std::size_t> epochs = {2000, 4000, 8000};
  // Each grid point trains for round(epochs * epoch_scale) epochs, at least 1.
  double epoch_scale = 0.05;
  std::size_t probe_rows = 500;  // real and synthetic rows in the probe set
  std::size_t reference_batch_size = 32;
  std::size_t reference_epochs = 2000;
};

struct ExperimentConfig {
  GenerationConfig generation;
  GanConfig gan;
  GanCorpus gan_corpus = GanCorpus::train_all;
  std::vector<ClassifierKind> classifiers = {KnnParams{}, GaussianNbParams{},
                                             DecisionTreeParams{}};
  std::size_t rounds = 20;
  std::size_t synthetic_count = 2000;
  double disc_threshold = kDefaultDiscThreshold;
  std::uint64_t seed = 1;
  std::string output_dir = "mcsguard-out";
  Mode mode = Mode::full;
  SweepConfig sweep;

  // Throws ConfigError.
  void validate() const;
};

// paper: 14,484 tasks with a 391 / 2,506 fake/legitimate test split, batch 32,
// 2,000 epochs, 20 rounds, 2,000 synthetic rows.
// desk: 2,000 tasks, 500 epochs, 5 rounds, 300 synthetic rows.
ExperimentConfig preset_config(Preset preset);

// Applies a JSON document on top of base; unknown keys are rejected.
ExperimentConfig apply_config_json(ExperimentConfig base, std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base);
// The effective configuration, in the same JSON form.
std::string config_to_json(const ExperimentConfig& config);

struct RunSummary {
  MetricReport report;  // empty for datagen-only and train-only
  std::size_t tasks = 0;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

// Receives one line per completed step; may be empty.
using ProgressFn = std::function<void(const std::string&)>;

// Dispatches on config.mode (sweep excluded). Throws on I/O failure, on a
// missing checkpoint in eval-only mode, or when every round diverges.
RunSummary run(const ExperimentConfig& config, const ProgressFn& progress = {});

struct SweepPoint {
  std::size_t batch_size = 0;
  std::size_t epochs = 0;          // grid value
  std::size_t trained_epochs = 0;  // after epoch_scale
  double probe_accuracy = 0.0;
  bool reference = false;  // the configuration used for the main runs
  std::string error;       // set when training diverged
};

struct SweepReport {
  std::vector<SweepPoint> points;   // grid order: batch size major
  std::vector<std::size_t> ranking; // indices into points, best first
};

// Also writes dataset.csv, scaler.json and sweep.csv under output_dir.
SweepReport sweep(const ExperimentConfig& config, const ProgressFn& progress = {});
std::string sweep_csv(const SweepReport& report);

}  // namespace mcsguard

#endif  // MCSGUARD_EXPERIMENT_HPP_
