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

// mcsguard: synthesize tasks, train GANs, and evaluate flat vs cascade
// detection. Settings are layered: preset, then --config, then flags.

#include <cstdio>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "mcsguard/error.hpp"
#include "mcsguard/experiment.hpp"
#include "mcsguard/kernels.hpp"

namespace {

void print_table(const mcsguard::MetricReport& report) {
  fmt::print("{:<5} {:<8} {:>7} {:>7} {:>7} {:>7} {:>7}\n", "clf", "arch", "AADR", "AASR", "OADR",
             "legit", "rounds");
  for (const auto& r : report.results) {
    fmt::print("{:<5} {:<8} {:>7.3f} {:>7.3f} {:>7.3f} {:>7.3f} {:>7}\n", r.classifier,
               mcsguard::to_string(r.architecture), r.aadr.final, r.aasr, r.oadr.final,
               r.legitimate_loss.final, r.rounds);
  }
  for (const auto& f : report.failed_rounds) {
    fmt::print("round {} excluded: {}\n", f.round, f.reason);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GAN-based fake sensing task detection experiments"};
  std::string preset = "paper";
  std::string config_path;
  std::optional<std::string> mode;
  std::optional<std::size_t> rounds;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> isa;
  bool print_config = false;
  bool quiet = false;

  app.add_option("--preset", preset, "Base configuration")
      ->check(CLI::IsMember({"paper", "desk"}))
      ->capture_default_str();
  app.add_option("--config", config_path, "JSON config applied on top of the preset")
      ->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "full, datagen-only, train-only, eval-only or sweep")
      ->check(CLI::IsMember({"full", "datagen-only", "train-only", "eval-only", "sweep"}));
  app.add_option("--rounds", rounds, "Repetition rounds")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Base seed; round r uses seed + r");
  app.add_option("--out", out, "Output directory");
  app.add_option("--isa", isa, "Force the kernel variant")->check(CLI::IsMember({"scalar", "avx2"}));
  app.add_flag("--print-config", print_config, "Print the effective config and exit");
  app.add_flag("-q,--quiet", quiet, "No progress lines");
  CLI11_PARSE(app, argc, argv);

  try {
    auto config = mcsguard::preset_config(mcsguard::preset_from_string(preset));
    if (!config_path.empty()) config = mcsguard::load_config_file(config_path, std::move(config));
    if (mode) config.mode = mcsguard::mode_from_string(*mode);
    if (rounds) config.rounds = *rounds;
    if (seed) config.seed = *seed;
    if (out) config.output_dir = *out;
    if (isa) {
      mcsguard::kernels::select(*isa == "avx2" ? mcsguard::kernels::Isa::avx2
                                               : mcsguard::kernels::Isa::scalar);
    }
    config.validate();
    if (print_config) {
      fmt::print("{}", mcsguard::config_to_json(config));
      return 0;
    }

    mcsguard::ProgressFn progress;
    if (!quiet) {
      progress = [](const std::string& line) { fmt::print(stderr, "{}\n", line); };
      fmt::print(stderr, "kernels: {}\n",
                 mcsguard::kernels::isa_name(mcsguard::kernels::active().isa));
    }

    if (config.mode == mcsguard::Mode::sweep) {
      const auto report = mcsguard::sweep(config, progress);
      fmt::print("{}", mcsguard::sweep_csv(report));
      return 0;
    }
    const auto summary = mcsguard::run(config, progress);
    if (!summary.report.results.empty()) print_table(summary.report);
    return 0;
  } catch (const mcsguard::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
