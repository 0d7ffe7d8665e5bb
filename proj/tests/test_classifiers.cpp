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

#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "mcsguard/classifiers.hpp"
#include "mcsguard/error.hpp"
#include "oracles.hpp"

using namespace mcsguard;

namespace {

struct Data {
  Matrix rows;
  std::vector<int> labels;
};

Data blobs(std::size_t n, std::size_t d, std::uint64_t seed, bool integer_grid = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 3);
  Data out{Matrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = i % 3 == 0 ? 0 : 1;
    for (std::size_t f = 0; f < d; ++f) {
      out.rows(i, f) = integer_grid ? grid(rng) : g(rng) + (out.labels[i] ? 0.7 : -0.7);
    }
  }
  return out;
}

std::string tmp(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("gini") {
  CHECK(gini(0, 0) == 0.0);
  CHECK(gini(5, 0) == 0.0);
  CHECK(gini(2, 2) == 0.5);
  CHECK(gini(1, 3) == doctest::Approx(0.375));
}

TEST_CASE("knn matches a brute-force scan") {
  const Data d = blobs(300, 4, 1, true);  // many exact distance ties
  const KnnClassifier knn(KnnParams{5}, d.rows, d.labels);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> grid(0, 3);
  for (int q = 0; q < 200; ++q) {
    std::vector<double> x(4);
    for (double& v : x) v = grid(rng);
    CHECK(knn.predict_one(x) == oracle::knn_predict(d.rows, d.labels, x, 5));
  }
  const auto nb = knn.neighbours(d.rows.row(10));
  REQUIRE(nb.size() == 5);
  CHECK(nb[0] <= 10);
}

TEST_CASE("knn parameter checks") {
  const Data d = blobs(10, 2, 3);
  CHECK_THROWS_AS(KnnClassifier(KnnParams{4}, d.rows, d.labels), ConfigError);
  CHECK_THROWS_AS(KnnClassifier(KnnParams{11}, d.rows, d.labels), ConfigError);
  const KnnClassifier one(KnnParams{1}, d.rows, d.labels);
  for (std::size_t i = 0; i < 10; ++i) CHECK(one.predict_one(d.rows.row(i)) == d.labels[i]);
  CHECK_THROWS_AS(one.predict_one(std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("naive bayes matches hand-computed posteriors") {
  const Data d = blobs(120, 3, 4);
  const GaussianNb nb = GaussianNb::fit(GaussianNbParams{}, d.rows, d.labels);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.5);
  for (int q = 0; q < 100; ++q) {
    std::vector<double> x = {g(rng), g(rng), g(rng)};
    const auto ref = oracle::nb_log_joint(d.rows, d.labels, x, 1e-9);
    const auto got = nb.joint_log_likelihood(x);
    CHECK(std::abs(got[0] - ref[0]) <= 1e-9 * (1 + std::abs(ref[0])));
    CHECK(std::abs(got[1] - ref[1]) <= 1e-9 * (1 + std::abs(ref[1])));
    CHECK(nb.predict_one(x) == (ref[1] > ref[0] ? 1 : 0));
  }
}

TEST_CASE("naive bayes tiny example") {
  // Class 0 at x = {0, 2}, class 1 at x = {4, 6}: means 1 and 5, variance 1.
  const Matrix rows{{0.0}, {2.0}, {4.0}, {6.0}};
  const std::vector<int> labels = {0, 0, 1, 1};
  const GaussianNb nb = GaussianNb::fit(GaussianNbParams{1e-12}, rows, labels);
  CHECK(nb.stats()[0].mean[0] == 1.0);
  CHECK(nb.stats()[1].mean[0] == 5.0);
  CHECK(nb.stats()[0].variance[0] == doctest::Approx(1.0));
  CHECK(nb.predict_one(std::vector<double>{2.9}) == 0);
  CHECK(nb.predict_one(std::vector<double>{3.1}) == 1);
  CHECK(nb.predict_one(std::vector<double>{3.0}) == 0);  // exact tie
}

TEST_CASE("decision tree root split equals exhaustive enumeration") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> val(0, 4), lab(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 9;  // 2..10 points
    Matrix rows(n, 3);
    std::vector<int> labels(n);
    for (double& v : rows.values()) v = val(rng);
    for (int& l : labels) l = lab(rng);
    labels[0] = 0;
    labels[1] = 1;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    const auto got = best_gini_split(rows, labels, all);
    const auto ref = oracle::exhaustive_split(rows, labels);
    if (ref.feature < 0) {
      CHECK(!got.has_value());
      continue;
    }
    REQUIRE(got.has_value());
    CHECK(got->weighted_impurity == doctest::Approx(ref.impurity).epsilon(1e-12));
    CHECK(got->feature == ref.feature);
    CHECK(got->threshold == ref.threshold);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("decision tree fits separable data perfectly") {
  const Data d = blobs(200, 3, 7);
  const DecisionTree t = DecisionTree::fit(DecisionTreeParams{}, d.rows, d.labels);
  for (std::size_t i = 0; i < 200; ++i) CHECK(t.predict_one(d.rows.row(i)) == d.labels[i]);
  DecisionTreeParams shallow;
  shallow.max_depth = 2;
  CHECK(DecisionTree::fit(shallow, d.rows, d.labels).depth() <= 2);
  DecisionTreeParams stump;
  stump.max_depth = 1;
  const auto s = DecisionTree::fit(stump, d.rows, d.labels);
  CHECK(s.nodes().size() == 3);
}

TEST_CASE("identical rows with mixed labels become a majority leaf") {
  const Matrix rows{{1.0}, {1.0}, {1.0}};
  const DecisionTree t = DecisionTree::fit({}, rows, std::vector<int>{1, 1, 0});
  CHECK(t.nodes().size() == 1);
  CHECK(t.predict_one(std::vector<double>{1.0}) == 1);
}

TEST_CASE("fit rejects degenerate inputs") {
  const Matrix rows{{1.0}, {2.0}};
  for (const ClassifierKind& k : {ClassifierKind{KnnParams{1}}, ClassifierKind{GaussianNbParams{}},
                                  ClassifierKind{DecisionTreeParams{}}}) {
    CHECK_THROWS_AS(fit(k, rows, std::vector<int>{1, 1}), DataError);
    CHECK_THROWS_AS(fit(k, rows, std::vector<int>{1}), ShapeError);
  }
  CHECK(classifier_name(ClassifierKind{GaussianNbParams{}}) == "nb");
}

TEST_CASE("classifier checkpoints round-trip") {
  const Data d = blobs(150, 4, 8);
  const Data q = blobs(60, 4, 9);
  for (const ClassifierKind& k : {ClassifierKind{KnnParams{3}}, ClassifierKind{GaussianNbParams{}},
                                  ClassifierKind{DecisionTreeParams{}}}) {
    const TrainedClassifier m = fit(k, d.rows, d.labels);
    const auto path = tmp("mcsguard_clf_rt.json");
    save_classifier(path, m, "blobs");
    const TrainedClassifier back = load_classifier(path, &d.rows, d.labels);
    CHECK(predict(back, q.rows) == predict(m, q.rows));
    CHECK(classifier_name(back) == classifier_name(m));
    if (std::holds_alternative<KnnClassifier>(m)) {
      CHECK_THROWS_AS(load_classifier(path), IoError);
    }
    std::remove(path.c_str());
  }
}
