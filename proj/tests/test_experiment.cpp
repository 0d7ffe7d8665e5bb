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

#include <filesystem>
#include <set>

#include "doctest.h"
#include "mcsguard/error.hpp"
#include "mcsguard/experiment.hpp"
#include "mcsguard/io_util.hpp"
#include "mcsguard/random.hpp"

using namespace mcsguard;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(const char* dir) {
  ExperimentConfig c = preset_config(Preset::desk);
  c.generation.total_tasks = 300;
  c.gan.noise_dim = 8;
  c.gan.gen_hidden = {16};
  c.gan.disc_hidden = {16};
  c.gan.epochs = 30;
  c.rounds = 2;
  c.synthetic_count = 40;
  c.seed = 5;
  c.output_dir = (fs::temp_directory_path() / dir).string();
  fs::remove_all(c.output_dir);
  return c;
}

}  // namespace

TEST_CASE("presets") {
  const auto paper = preset_config(Preset::paper);
  CHECK(paper.generation.total_tasks == 14484);
  CHECK(paper.generation.fake_count() == 1897);
  CHECK(paper.generation.test_fake_count == 391u);
  CHECK(paper.generation.test_legitimate_count == 2506u);
  CHECK(paper.gan.batch_size == 32);
  CHECK(paper.gan.epochs == 2000);
  CHECK(paper.rounds == 20);
  CHECK(paper.synthetic_count == 2000);
  const auto desk = preset_config(Preset::desk);
  CHECK(desk.generation.total_tasks == 2000);
  CHECK(desk.gan.epochs == 500);
  CHECK(desk.rounds == 5);
  CHECK_NOTHROW(paper.validate());
  CHECK_NOTHROW(desk.validate());
  CHECK_THROWS_AS(preset_from_string("laptop"), ConfigError);
}

TEST_CASE("config json overrides and round-trips") {
  const auto base = preset_config(Preset::paper);
  const auto c = apply_config_json(base, R"({
    "rounds": 3,
    "mode": "eval-only",
    "gan": {"batch_size": 15, "disc_hidden_activation": "sigmoid", "disc_update": "joint"},
    "generation": {"test_fake_count": null, "test_legitimate_count": null,
                   "fake": {"hour": {"p_first": 0.5, "first": [7, 9], "second": [10, 17]}}},
    "classifiers": [{"kind": "knn", "k": 7}, {"kind": "dt", "max_depth": 4}]
  })");
  CHECK(c.rounds == 3);
  CHECK(c.mode == Mode::eval_only);
  CHECK(c.gan.batch_size == 15);
  CHECK(c.gan.epochs == 2000);
  CHECK(c.gan.disc_hidden_activation == Activation::sigmoid);
  CHECK(c.gan.disc_update == DiscriminatorUpdate::joint);
  CHECK(!c.generation.test_fake_count);
  CHECK(c.generation.fake.hour.p_first == 0.5);
  CHECK(c.generation.fake.hour.first == IntRange{7, 9});
  REQUIRE(c.classifiers.size() == 2);
  CHECK(std::get<KnnParams>(c.classifiers[0]).k == 7);
  CHECK(std::get<DecisionTreeParams>(c.classifiers[1]).max_depth == 4u);

  const auto again = apply_config_json(ExperimentConfig{}, config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  CHECK_THROWS_AS(apply_config_json(base, R"({"round": 3})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(base, R"({"gan": {"batch": 3}})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(base, R"({"rounds": "x"})"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(base, "{"), ConfigError);
  CHECK_THROWS_AS(apply_config_json(base, R"({"mode": "fast"})"), ConfigError);
}

TEST_CASE("config validation") {
  auto c = preset_config(Preset::desk);
  c.rounds = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset_config(Preset::desk);
  c.classifiers = {KnnParams{}, KnnParams{3}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = preset_config(Preset::desk);
  c.disc_threshold = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("full run writes artifacts, is deterministic and replays from checkpoints") {
  auto c = tiny("mcsguard_exp_a");
  const auto s1 = run(c);
  const std::string dir = c.output_dir;
  for (const char* f : {"dataset.csv", "scaler.json", "gan_loss.csv", "report.json", "report.csv",
                        "verdicts_knn_flat.csv", "verdicts_dt_cascade.csv", "report_nb_cascade.csv",
                        "classifier_dt.json", "round_00/generator.bin",
                        "round_01/discriminator.bin", "round_01/gan_loss.csv",
                        "round_00/verdicts_nb_flat.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(fs::path(dir) / f));
  }
  REQUIRE(s1.report.results.size() == 6);
  CHECK(s1.report.rounds_used == std::vector<std::size_t>{0, 1});
  const std::string report = read_text_file(dir + "/report.json");

  auto c2 = tiny("mcsguard_exp_b");
  run(c2);
  CHECK(read_text_file(c2.output_dir + "/report.json") == report);
  CHECK(read_text_file(c2.output_dir + "/verdicts_dt_cascade.csv") ==
        read_text_file(dir + "/verdicts_dt_cascade.csv"));

  c.mode = Mode::eval_only;
  fs::remove(dir + "/report.json");
  run(c);
  CHECK(read_text_file(dir + "/report.json") == report);

  auto c3 = tiny("mcsguard_exp_c");
  c3.seed = 6;
  run(c3);
  CHECK(read_text_file(c3.output_dir + "/report.json") != report);
}

TEST_CASE("report counts reconcile with the verdict files") {
  auto c = tiny("mcsguard_exp_d");
  c.rounds = 1;
  const auto s = run(c);
  const auto verdicts = read_verdicts_csv(c.output_dir + "/round_00/verdicts_knn_cascade.csv");
  const auto counts = tally(verdicts);
  const auto* r = s.report.find("knn", Architecture::cascade);
  REQUIRE(r != nullptr);
  CHECK(r->counts == counts);
  CHECK(counts.total_adversarial == 40);
  CHECK(counts.total_original_attacks + counts.total_legitimate == s.test_rows);
}

TEST_CASE("modes") {
  auto c = tiny("mcsguard_exp_e");
  c.mode = Mode::datagen_only;
  const auto s = run(c);
  CHECK(s.tasks == 300);
  CHECK(fs::exists(c.output_dir + "/dataset.csv"));
  CHECK(!fs::exists(c.output_dir + "/round_00"));
  CHECK(s.report.results.empty());

  c.mode = Mode::eval_only;
  CHECK_THROWS_AS(run(c), IoError);  // no checkpoints yet

  c.mode = Mode::train_only;
  run(c);
  CHECK(fs::exists(c.output_dir + "/round_01/generator.bin"));
  CHECK(!fs::exists(c.output_dir + "/report.json"));
  c.mode = Mode::eval_only;
  const auto e = run(c);
  CHECK(e.report.results.size() == 6);

  auto full = tiny("mcsguard_exp_f");
  run(full);
  CHECK(read_text_file(full.output_dir + "/report.json") ==
        read_text_file(c.output_dir + "/report.json"));
}

TEST_CASE("diverged rounds are excluded and reported") {
  auto c = tiny("mcsguard_exp_g");
  c.gan.learning_rate = 1e300;
  CHECK_THROWS_AS(run(c), DataError);
  CHECK(fs::exists(c.output_dir + "/round_00/FAILED"));
}

TEST_CASE("sweep ranks every grid point once") {
  auto c = tiny("mcsguard_exp_h");
  c.sweep.batch_sizes = {8, 16};
  c.sweep.epochs = {20, 40};
  c.sweep.epoch_scale = 1.0;
  c.sweep.probe_rows = 30;
  c.sweep.reference_batch_size = 16;
  c.sweep.reference_epochs = 40;
  const auto r = sweep(c);
  REQUIRE(r.points.size() == 4);
  CHECK(std::set<std::size_t>(r.ranking.begin(), r.ranking.end()).size() == 4);
  for (std::size_t i = 1; i < r.ranking.size(); ++i) {
    CHECK(r.points[r.ranking[i - 1]].probe_accuracy >= r.points[r.ranking[i]].probe_accuracy);
  }
  CHECK(r.points[3].reference);
  CHECK(fs::exists(c.output_dir + "/sweep.csv"));
}

TEST_CASE("single-point sweep equals one training call") {
  auto c = tiny("mcsguard_exp_i");
  c.sweep.batch_sizes = {8};
  c.sweep.epochs = {25};
  c.sweep.epoch_scale = 1.0;
  c.sweep.probe_rows = 30;
  const auto r = sweep(c);
  REQUIRE(r.points.size() == 1);

  GenerationConfig g = c.generation;
  g.rng_seed = derive_seed(c.seed, "dataset");
  const auto tasks = generate_tasks(g);
  const auto sp = split(tasks, g);
  GanConfig gc = c.gan;
  gc.batch_size = 8;
  gc.epochs = 25;
  gc.seed = c.seed;
  const GanModel m = train_gan(sp.train_features, gc);
  const Matrix real = sp.test_features.slice_rows(0, 30);
  const Matrix fake = generate(m, 30, derive_seed(c.seed, "probe"));
  CHECK(r.points[0].probe_accuracy == discriminator_accuracy(m, real, fake));
}
