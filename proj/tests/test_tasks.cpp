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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "mcsguard/error.hpp"
#include "mcsguard/random.hpp"
#include "mcsguard/tasks.hpp"

using namespace mcsguard;

namespace {

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
  CHECK(derive_seed(5, "features") == derive_seed(5, "features"));
}

TEST_CASE("generation respects counts, ranges and derived fields") {
  GenerationConfig g;
  g.total_tasks = 3000;
  const auto tasks = generate_tasks(g);
  REQUIRE(tasks.size() == 3000);
  const auto fakes = std::count_if(tasks.begin(), tasks.end(), [](auto& t) { return !t.legitimate; });
  CHECK(static_cast<std::size_t>(fakes) == g.fake_count());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    CHECK(t.id == static_cast<std::int64_t>(i));
    CHECK(t.day >= 1);
    CHECK(t.day <= 6);
    CHECK(t.minute <= 59);
    CHECK(t.coverage >= 30);
    CHECK(t.coverage <= 100);
    CHECK(t.duration % 10 == 0);
    CHECK(t.remaining_time == t.duration);
    CHECK(t.on_peak_hour == (t.hour >= 7 && t.hour <= 17));
    CHECK(t.grid_number == grid_cell(t.latitude, t.longitude, g.bounding_box, 10));
    CHECK(t.movement_radius >= 10.0);
    CHECK(t.movement_radius <= 80.0);
    if (!t.legitimate) {
      CHECK(t.hour >= 7);
      CHECK(t.hour <= 17);
    }
  }
  CHECK(generate_tasks(g) == tasks);
  g.rng_seed += 1;
  CHECK(generate_tasks(g) != tasks);
}

TEST_CASE("grid cells are row-major with the upper edge clamped") {
  const BoundingBox b;
  CHECK(grid_cell(b.lat_min, b.lon_min, b, 10) == 0);
  CHECK(grid_cell(b.lat_max, b.lon_max, b, 10) == 99);
  CHECK(grid_cell(b.lat_min, b.lon_max, b, 10) == 9);
  CHECK(grid_cell(b.lat_max, b.lon_min, b, 10) == 90);
}

TEST_CASE("uniform remaining time stays within the duration") {
  GenerationConfig g;
  g.total_tasks = 500;
  g.remaining_time = RemainingTimeRule::uniform;
  for (const auto& t : generate_tasks(g)) {
    CHECK(t.remaining_time >= 1);
    CHECK(t.remaining_time <= t.duration);
  }
}

TEST_CASE("invalid generation configs are rejected") {
  GenerationConfig g;
  g.fake_fraction = 1.0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.test_fake_count = 3;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.fake.hour.first = {10, 30};
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = {};
  g.legitimate.duration = {1.0, {11, 19}, {11, 19}};
  CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("scaler maps the training range to [-1, 1]") {
  GenerationConfig g;
  g.total_tasks = 400;
  const auto tasks = generate_tasks(g);
  const auto enc = encode(tasks);
  for (double v : enc.features.values()) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& r = enc.scaler.ranges()[f];
    CHECK(enc.scaler.encode(f, r.min) == (r.min == r.max ? 0.0 : -1.0));
    if (r.min != r.max) CHECK(enc.scaler.encode(f, r.max) == doctest::Approx(1.0));
  }
  for (std::size_t i = 0; i < 20; ++i) {
    const auto back = decode_row(enc.features.row(i), enc.scaler);
    const auto raw = raw_features(tasks[i]);
    CHECK(back[2] == raw[2]);
    CHECK(back[3] == raw[3]);
    CHECK(back[5] == raw[5]);
    CHECK(back[10] == raw[10]);
    CHECK(back[0] == doctest::Approx(raw[0]));
  }
  CHECK(enc.labels[0] == (tasks[0].legitimate ? kLegitimate : kFake));
}

TEST_CASE("constant features encode to zero and booleans to +-1") {
  std::vector<SensingTask> tasks(3);
  tasks[1].on_peak_hour = true;
  tasks[2].hour = 4;
  const auto enc = encode(tasks);
  CHECK(enc.features(0, 2) == 0.0);  // day constant
  CHECK(enc.features(0, 10) == -1.0);
  CHECK(enc.features(1, 10) == 1.0);
  CHECK_THROWS_AS(encode(std::vector<SensingTask>{}), DataError);
}

TEST_CASE("stratified partition") {
  SUBCASE("ten task example") {
    std::vector<int> labels = {1, 1, 0, 1, 1, 1, 0, 1, 1, 1};
    const auto s = stratified_partition(labels, 0.8, 3);
    REQUIRE(s.test.size() == 2);
    int fake_test = 0;
    for (auto i : s.test) fake_test += labels[i] == 0;
    CHECK(fake_test == 1);
    CHECK(s.train.size() == 8);
  }
  SUBCASE("disjoint, covering and ascending") {
    std::vector<int> labels(1000);
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 7 == 0 ? 0 : 1;
    const auto s = stratified_partition(labels, 0.8, 9);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 1000);
    CHECK(s.train.size() + s.test.size() == 1000);
    CHECK(std::is_sorted(s.train.begin(), s.train.end()));
    CHECK(std::is_sorted(s.test.begin(), s.test.end()));
    CHECK(s.test.size() == 200);
  }
  SUBCASE("pinned counts") {
    std::vector<int> labels(100, 1);
    std::fill_n(labels.begin(), 20, 0);
    const auto s = stratified_partition(labels, 0.8, 1, 7, 11);
    int fake = 0;
    for (auto i : s.test) fake += labels[i] == 0;
    CHECK(fake == 7);
    CHECK(s.test.size() == 18);
    CHECK_THROWS_AS(stratified_partition(labels, 0.8, 1, 20, 11), DataError);
  }
  SUBCASE("single class cannot be split") {
    std::vector<int> labels = {1, 1, 1, 0};
    CHECK_THROWS_AS(stratified_partition(labels, 0.8, 1), DataError);
  }
}

TEST_CASE("dataset split scales with training statistics only") {
  GenerationConfig g;
  g.total_tasks = 600;
  const auto tasks = generate_tasks(g);
  const auto s = split(tasks, g);
  CHECK(s.train_features.rows() + s.test_features.rows() == 600);
  CHECK(s.train_fakes().rows() ==
        static_cast<std::size_t>(std::count(s.train_labels.begin(), s.train_labels.end(), 0)));
  std::vector<SensingTask> train;
  for (auto i : s.train_index) train.push_back(tasks[i]);
  CHECK(s.scaler == FeatureScaler::fit(train));
  for (std::size_t i = 0; i < s.test_index.size(); ++i) {
    CHECK(s.test_provenance[i] ==
          (tasks[s.test_index[i]].legitimate ? Provenance::legitimate : Provenance::original_fake));
  }
}

TEST_CASE("task csv and scaler json round-trip exactly") {
  GenerationConfig g;
  g.total_tasks = 200;
  const auto tasks = generate_tasks(g);
  const auto path = tmp_path("mcsguard_tasks_rt.csv");
  write_tasks_csv(path, tasks);
  // Movement radius is not a CSV column; everything else must survive.
  auto expected = tasks;
  for (auto& t : expected) t.movement_radius = SensingTask{}.movement_radius;
  CHECK(read_tasks_csv(path) == expected);
  const auto spath = tmp_path("mcsguard_scaler_rt.json");
  const auto sc = FeatureScaler::fit(tasks);
  write_scaler_json(spath, sc);
  CHECK(read_scaler_json(spath) == sc);
  CHECK_THROWS_AS(read_tasks_csv(tmp_path("mcsguard_missing.csv")), IoError);
  std::remove(path.c_str());
  std::remove(spath.c_str());
}
