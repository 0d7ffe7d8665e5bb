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

#include "mcsguard/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "mcsguard/cascade.hpp"
#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"
#include "mcsguard/random.hpp"

namespace mcsguard {
namespace {

namespace fs = std::filesystem;

void say(const ProgressFn& progress, const std::string& line) {
  if (progress) progress(line);
}

std::string path_in(const std::string& dir, std::string_view name) {
  return (fs::path(dir) / name).string();
}

std::string round_dir(const ExperimentConfig& c, std::size_t round) {
  return path_in(c.output_dir, fmt::format("round_{:02}", round));
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir, ec.message()));
}

GenerationConfig dataset_generation(const ExperimentConfig& c) {
  GenerationConfig g = c.generation;
  g.rng_seed = derive_seed(c.seed, "dataset");
  return g;
}

struct Prepared {
  std::vector<SensingTask> tasks;
  DatasetSplit split;
  Matrix corpus;  // GAN training rows
};

Prepared prepare(const ExperimentConfig& c, bool from_disk, const ProgressFn& progress) {
  Prepared p;
  const GenerationConfig g = dataset_generation(c);
  if (from_disk) {
    p.tasks = read_tasks_csv(path_in(c.output_dir, "dataset.csv"));
  } else {
    p.tasks = generate_tasks(g);
    make_dir(c.output_dir);
    write_tasks_csv(path_in(c.output_dir, "dataset.csv"), p.tasks);
  }
  p.split = split(p.tasks, g);
  if (!from_disk) write_scaler_json(path_in(c.output_dir, "scaler.json"), p.split.scaler);
  p.corpus = c.gan_corpus == GanCorpus::train_all ? p.split.train_features : p.split.train_fakes();
  say(progress, fmt::format("dataset: {} tasks, {} train / {} test rows", p.tasks.size(),
                            p.split.train_labels.size(), p.split.test_labels.size()));
  return p;
}

GanConfig round_gan(const ExperimentConfig& c, std::size_t round) {
  GanConfig g = c.gan;
  g.seed = c.seed + round;
  return g;
}

std::uint64_t synthetic_seed(const ExperimentConfig& c, std::size_t round) {
  return derive_seed(c.seed + round, "synthetic");
}

struct RoundModel {
  std::size_t round = 0;
  std::optional<GanModel> model;
  std::string failure;
};

RoundModel train_round(const ExperimentConfig& c, const Prepared& p, std::size_t round,
                       const ProgressFn& progress) {
  const std::string dir = round_dir(c, round);
  make_dir(dir);
  for (const char* stale : {"FAILED", "generator.bin", "discriminator.bin", "gan_loss.csv"}) {
    std::error_code ec;
    fs::remove(path_in(dir, stale), ec);
  }
  RoundModel out{round, std::nullopt, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    GanModel model = train_gan(p.corpus, round_gan(c, round));
    save_model(path_in(dir, "generator.bin"), model.generator);
    save_model(path_in(dir, "discriminator.bin"), model.discriminator);
    write_loss_history_csv(path_in(dir, "gan_loss.csv"), model.history);
    out.model = std::move(model);
  } catch (const TrainingDivergence& e) {
    out.failure = e.what();
    write_text_file(path_in(dir, "FAILED"), out.failure + "\n");
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  say(progress, out.model ? fmt::format("round {:02}: GAN trained in {:.1f} s", round, secs)
                          : fmt::format("round {:02}: failed: {}", round, out.failure));
  return out;
}

RoundModel load_round(const ExperimentConfig& c, std::size_t round) {
  const std::string dir = round_dir(c, round);
  RoundModel out{round, std::nullopt, {}};
  if (fs::exists(path_in(dir, "FAILED"))) {
    out.failure = read_text_file(path_in(dir, "FAILED"));
    while (!out.failure.empty() && out.failure.back() == '\n') out.failure.pop_back();
    return out;
  }
  GanModel model;
  model.generator = load_model(path_in(dir, "generator.bin"));
  model.discriminator = load_model(path_in(dir, "discriminator.bin"));
  model.history = read_loss_history_csv(path_in(dir, "gan_loss.csv"));
  model.trained = true;
  out.model = std::move(model);
  return out;
}

void write_merged_loss(const ExperimentConfig& c, const std::vector<RoundModel>& rounds) {
  std::string out = "round,epoch,loss_real,loss_fake,loss_gan\n";
  for (const auto& r : rounds) {
    if (!r.model) continue;
    for (const auto& h : r.model->history) {
      fmt::format_to(std::back_inserter(out), "{},{},{},{},{}\n", r.round, h.epoch, h.loss_real,
                     h.loss_fake, h.loss_gan);
    }
  }
  write_text_file(path_in(c.output_dir, "gan_loss.csv"), out);
}

// Fits the classifiers once and scores every round against them.
class Evaluator {
 public:
  Evaluator(const ExperimentConfig& c, const Prepared& p) : c_(c), p_(p) {
    for (const auto& kind : c.classifiers) {
      TrainedClassifier clf = fit(kind, p.split.train_features, p.split.train_labels);
      const std::string name(classifier_name(kind));
      save_classifier(path_in(c.output_dir, fmt::format("classifier_{}.json", name)), clf,
                      "dataset.csv#train");
      classifiers_.emplace_back(name, std::move(clf));
    }
    for (const auto& [name, clf] : classifiers_) {
      for (Architecture a : {Architecture::flat, Architecture::cascade}) {
        merged_[key(name, a)] = "round," + verdict_csv_header() + "\n";
      }
    }
  }

  void add(const RoundModel& r) {
    if (!r.model) {
      failed_.push_back({r.round, r.failure});
      return;
    }
    used_.push_back(r.round);
    const Matrix synthetic = generate(*r.model, c_.synthetic_count, synthetic_seed(c_, r.round));
    const MixedDataset mixed = build_mixed(p_.split, synthetic);
    const std::vector<double> probs = discriminate(*r.model, mixed.rows);
    const std::string dir = round_dir(c_, r.round);
    for (const auto& [name, clf] : classifiers_) {
      for (Architecture a : {Architecture::flat, Architecture::cascade}) {
        const auto verdicts =
            a == Architecture::cascade
                ? classify_with_probabilities(mixed, probs, clf, c_.disc_threshold)
                : classify_flat(mixed, clf);
        write_verdicts_csv(path_in(dir, fmt::format("verdicts_{}_{}.csv", name, to_string(a))),
                           verdicts);
        std::string& merged = merged_[key(name, a)];
        for (const auto& v : verdicts) {
          fmt::format_to(std::back_inserter(merged), "{},{}\n", r.round, verdict_csv_row(v));
        }
        counts_[key(name, a)].push_back(tally(verdicts));
      }
    }
  }

  MetricReport finish() {
    if (used_.empty()) throw DataError("every round failed; nothing to report");
    MetricReport report;
    report.rounds_used = used_;
    report.failed_rounds = failed_;
    for (const auto& [name, clf] : classifiers_) {
      for (Architecture a : {Architecture::flat, Architecture::cascade}) {
        const std::string k = key(name, a);
        report.results.push_back(summarize(name, a, counts_.at(k)));
        write_text_file(path_in(c_.output_dir, fmt::format("verdicts_{}.csv", k)), merged_.at(k));
        write_text_file(path_in(c_.output_dir, fmt::format("report_{}.csv", k)),
                        result_csv(report.results.back()));
      }
    }
    write_text_file(path_in(c_.output_dir, "report.json"), report_json(report));
    write_text_file(path_in(c_.output_dir, "report.csv"), report_csv(report));
    return report;
  }

 private:
  static std::string key(const std::string& name, Architecture a) {
    return fmt::format("{}_{}", name, to_string(a));
  }

  const ExperimentConfig& c_;
  const Prepared& p_;
  std::vector<std::pair<std::string, TrainedClassifier>> classifiers_;
  std::map<std::string, std::string> merged_;
  std::map<std::string, std::vector<RoundCounts>> counts_;
  std::vector<std::size_t> used_;
  std::vector<FailedRound> failed_;
};

}  // namespace

RunSummary run(const ExperimentConfig& c, const ProgressFn& progress) {
  c.validate();
  if (c.mode == Mode::sweep) throw ConfigError("use sweep() for sweep mode");
  if (c.mode == Mode::eval_only && !fs::exists(path_in(c.output_dir, "dataset.csv"))) {
    throw IoError(fmt::format("eval-only needs {}", path_in(c.output_dir, "dataset.csv")));
  }
  const Prepared p = prepare(c, c.mode == Mode::eval_only, progress);
  RunSummary summary;
  summary.tasks = p.tasks.size();
  summary.train_rows = p.split.train_labels.size();
  summary.test_rows = p.split.test_labels.size();
  if (c.mode == Mode::datagen_only) return summary;
  c.gan.validate(p.corpus.rows());

  if (c.mode == Mode::train_only) {
    std::vector<RoundModel> rounds;
    for (std::size_t r = 0; r < c.rounds; ++r) {
      RoundModel m = train_round(c, p, r, progress);
      m.model.reset();
      rounds.push_back(std::move(m));
    }
    // Loss history is re-read so that memory stays flat across rounds.
    for (auto& m : rounds) {
      if (m.failure.empty()) m = load_round(c, m.round);
    }
    write_merged_loss(c, rounds);
    return summary;
  }

  Evaluator eval(c, p);
  std::vector<RoundModel> history;
  for (std::size_t r = 0; r < c.rounds; ++r) {
    RoundModel m = c.mode == Mode::eval_only ? load_round(c, r) : train_round(c, p, r, progress);
    eval.add(m);
    if (m.model) {
      // Keep the loss history only.
      GanModel slim;
      slim.history = std::move(m.model->history);
      m.model = std::move(slim);
    }
    history.push_back(std::move(m));
  }
  if (c.mode == Mode::full) write_merged_loss(c, history);
  summary.report = eval.finish();
  say(progress, fmt::format("report: {} round(s) used, {} failed", summary.report.rounds_used.size(),
                            summary.report.failed_rounds.size()));
  return summary;
}

SweepReport sweep(const ExperimentConfig& c, const ProgressFn& progress) {
  c.validate();
  const Prepared p = prepare(c, false, progress);
  const std::size_t n_probe = std::min(c.sweep.probe_rows, p.split.test_features.rows());
  const Matrix probe_real = p.split.test_features.slice_rows(0, n_probe);

  SweepReport report;
  for (std::size_t b : c.sweep.batch_sizes) {
    for (std::size_t e : c.sweep.epochs) {
      SweepPoint point;
      point.batch_size = b;
      point.epochs = e;
      point.trained_epochs = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(static_cast<double>(e) * c.sweep.epoch_scale)));
      point.reference = b == c.sweep.reference_batch_size && e == c.sweep.reference_epochs;
      GanConfig g = c.gan;
      g.batch_size = b;
      g.epochs = point.trained_epochs;
      g.seed = c.seed;
      try {
        const GanModel model = train_gan(p.corpus, g);
        const Matrix probe_fake = generate(model, n_probe, derive_seed(c.seed, "probe"));
        point.probe_accuracy = discriminator_accuracy(model, probe_real, probe_fake);
      } catch (const Error& err) {
        point.error = err.what();
      }
      say(progress, point.error.empty()
                        ? fmt::format("sweep batch {} epochs {}: accuracy {:.4f}", b,
                                      point.trained_epochs, point.probe_accuracy)
                        : fmt::format("sweep batch {} epochs {}: {}", b, point.trained_epochs,
                                      point.error));
      report.points.push_back(std::move(point));
    }
  }
  report.ranking.resize(report.points.size());
  for (std::size_t i = 0; i < report.ranking.size(); ++i) report.ranking[i] = i;
  std::stable_sort(report.ranking.begin(), report.ranking.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = report.points[a];
    const auto& pb = report.points[b];
    if (pa.error.empty() != pb.error.empty()) return pa.error.empty();
    return pa.probe_accuracy > pb.probe_accuracy;
  });
  write_text_file(path_in(c.output_dir, "sweep.csv"), sweep_csv(report));
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  auto clean = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  std::string out = "rank,batch_size,epochs,trained_epochs,probe_accuracy,reference,error\n";
  for (std::size_t rank = 0; rank < report.ranking.size(); ++rank) {
    const auto& p = report.points[report.ranking[rank]];
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{}\n", rank + 1, p.batch_size,
                   p.epochs, p.trained_epochs, p.probe_accuracy, p.reference ? 1 : 0, clean(p.error));
  }
  return out;
}

}  // namespace mcsguard
