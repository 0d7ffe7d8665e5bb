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

// Binary task classifiers: k-nearest neighbours, Gaussian naive Bayes and a
// CART decision tree. Labels are 0 (fake) and 1 (legitimate).

#ifndef MCSGUARD_CLASSIFIERS_HPP_
#define MCSGUARD_CLASSIFIERS_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcsguard/matrix.hpp"

namespace mcsguard {

struct KnnParams {
  std::size_t k = 5;  // odd, >= 1
  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

struct GaussianNbParams {
  // Added to every variance, scaled by the largest per-feature variance.
  double var_smoothing = 1e-9;
  friend bool operator==(const GaussianNbParams&, const GaussianNbParams&) = default;
};

struct DecisionTreeParams {
  std::optional<std::size_t> max_depth;  // unlimited when empty
  std::size_t min_samples_split = 2;
  friend bool operator==(const DecisionTreeParams&, const DecisionTreeParams&) = default;
};

using ClassifierKind = std::variant<KnnParams, GaussianNbParams, DecisionTreeParams>;

// "knn", "nb" or "dt".
std::string_view classifier_name(const ClassifierKind& kind);
void validate(const ClassifierKind& kind);

// Brute-force Euclidean kNN; distance ties go to the lower training row.
class KnnClassifier {
 public:
  KnnClassifier(KnnParams params, Matrix rows, std::vector<int> labels);

  int predict_one(std::span<const double> row) const;
  // Training row indices of the k nearest neighbours, nearest first.
  std::vector<std::size_t> neighbours(std::span<const double> row) const;

  const KnnParams& params() const noexcept { return params_; }
  const Matrix& rows() const noexcept { return rows_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::size_t feature_count() const noexcept { return rows_.cols(); }

 private:
  KnnParams params_;
  Matrix rows_;
  std::vector<int> labels_;
};

class GaussianNb {
 public:
  struct ClassStats {
    double log_prior = 0.0;
    std::vector<double> mean;
    std::vector<double> variance;  // already smoothed
    friend bool operator==(const ClassStats&, const ClassStats&) = default;
  };

  GaussianNb(GaussianNbParams params, std::array<ClassStats, 2> stats, double epsilon);
  static GaussianNb fit(GaussianNbParams params, const Matrix& rows, std::span<const int> labels);

  // Unnormalised log-posterior per class.
  std::array<double, 2> joint_log_likelihood(std::span<const double> row) const;
  // Argmax; an exact tie resolves to class 0.
  int predict_one(std::span<const double> row) const;

  const GaussianNbParams& params() const noexcept { return params_; }
  const std::array<ClassStats, 2>& stats() const noexcept { return stats_; }
  double epsilon() const noexcept { return epsilon_; }
  std::size_t feature_count() const noexcept { return stats_[0].mean.size(); }

 private:
  GaussianNbParams params_;
  std::array<ClassStats, 2> stats_;
  double epsilon_;
};

// CART with Gini impurity. Candidate thresholds are midpoints between
// adjacent distinct values; rows with value <= threshold go left. Among equal
// impurities the lowest feature index, then the lowest threshold, wins.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<std::size_t, 2> class_counts{};
    friend bool operator==(const Node&, const Node&) = default;

    bool is_leaf() const noexcept { return feature < 0; }
    // Majority class; a tie resolves to class 0.
    int majority() const noexcept { return class_counts[1] > class_counts[0] ? 1 : 0; }
  };

  DecisionTree(DecisionTreeParams params, std::vector<Node> nodes, std::size_t feature_count);
  static DecisionTree fit(DecisionTreeParams params, const Matrix& rows,
                          std::span<const int> labels);

  int predict_one(std::span<const double> row) const;

  const DecisionTreeParams& params() const noexcept { return params_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t feature_count() const noexcept { return feature_count_; }
  std::size_t depth() const;

 private:
  DecisionTreeParams params_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
  std::size_t feature_count_;
};

struct GiniSplit {
  int feature = -1;
  double threshold = 0.0;
  double weighted_impurity = 0.0;  // size-weighted child Gini, divided by n
};

// Gini impurity 1 - sum p_c^2 of a two-class count pair.
double gini(std::size_t zeros, std::size_t ones);
// Best split over all features of the given rows; nullopt when every
// feature is constant.
std::optional<GiniSplit> best_gini_split(const Matrix& rows, std::span<const int> labels,
                                         std::span<const std::size_t> subset);

using TrainedClassifier = std::variant<KnnClassifier, GaussianNb, DecisionTree>;

// Throws DataError unless both classes are present, ShapeError on mismatched
// row/label counts and ConfigError on invalid parameters.
TrainedClassifier fit(const ClassifierKind& kind, const Matrix& rows, std::span<const int> labels);
std::vector<int> predict(const TrainedClassifier& model, const Matrix& rows);
std::string_view classifier_name(const TrainedClassifier& model);

// JSON checkpoints. NB and DT store their fitted state; kNN stores k plus a
// reference to the dataset its rows come from and must be given those rows
// again on load.
void save_classifier(const std::string& path, const TrainedClassifier& model,
                     const std::string& dataset_reference = {});
TrainedClassifier load_classifier(const std::string& path, const Matrix* knn_rows = nullptr,
                                  std::span<const int> knn_labels = {});

}  // namespace mcsguard

#endif  // MCSGUARD_CLASSIFIERS_HPP_
