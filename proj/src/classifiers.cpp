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

#include "mcsguard/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/kernels.hpp"

namespace mcsguard {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_width(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw ShapeError(fmt::format("classifier was fitted on {} features, got {}", expected, got));
  }
}

void check_training_set(const Matrix& rows, std::span<const int> labels) {
  if (rows.rows() != labels.size()) {
    throw ShapeError(fmt::format("{} rows but {} labels", rows.rows(), labels.size()));
  }
  std::array<std::size_t, 2> counts{};
  for (int l : labels) {
    if (l != 0 && l != 1) throw DataError(fmt::format("label {} is not 0/1", l));
    ++counts[static_cast<std::size_t>(l)];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    throw DataError("training set must contain both classes");
  }
}

}  // namespace

std::string_view classifier_name(const ClassifierKind& kind) {
  return std::visit(overloaded{[](const KnnParams&) { return std::string_view("knn"); },
                               [](const GaussianNbParams&) { return std::string_view("nb"); },
                               [](const DecisionTreeParams&) { return std::string_view("dt"); }},
                    kind);
}

std::string_view classifier_name(const TrainedClassifier& model) {
  return std::visit(overloaded{[](const KnnClassifier&) { return std::string_view("knn"); },
                               [](const GaussianNb&) { return std::string_view("nb"); },
                               [](const DecisionTree&) { return std::string_view("dt"); }},
                    model);
}

void validate(const ClassifierKind& kind) {
  std::visit(overloaded{
                 [](const KnnParams& p) {
                   if (p.k == 0 || p.k % 2 == 0) throw ConfigError("kNN k must be odd and >= 1");
                 },
                 [](const GaussianNbParams& p) {
                   if (!(p.var_smoothing > 0.0)) throw ConfigError("var_smoothing must be > 0");
                 },
                 [](const DecisionTreeParams& p) {
                   if (p.min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
                   if (p.max_depth && *p.max_depth == 0) throw ConfigError("max_depth must be >= 1");
                 },
             },
             kind);
}

// ---------------------------------------------------------------------------
// kNN

KnnClassifier::KnnClassifier(KnnParams params, Matrix rows, std::vector<int> labels)
    : params_(params), rows_(std::move(rows)), labels_(std::move(labels)) {
  validate(ClassifierKind{params_});
  check_training_set(rows_, labels_);
  if (params_.k > rows_.rows()) {
    throw ConfigError(fmt::format("k = {} exceeds the {} training rows", params_.k, rows_.rows()));
  }
}

std::vector<std::size_t> KnnClassifier::neighbours(std::span<const double> row) const {
  check_width(rows_.cols(), row.size());
  const auto& k = kernels::active();
  std::vector<std::pair<double, std::size_t>> dist(rows_.rows());
  for (std::size_t i = 0; i < rows_.rows(); ++i) {
    dist[i] = {k.squared_distance(row.data(), rows_.row(i).data(), row.size()), i};
  }
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(params_.k);
  // Pair ordering compares distance, then index: lower index wins ties.
  std::nth_element(dist.begin(), mid - 1, dist.end());
  std::sort(dist.begin(), mid);
  std::vector<std::size_t> out;
  out.reserve(params_.k);
  for (auto it = dist.begin(); it != mid; ++it) out.push_back(it->second);
  return out;
}

int KnnClassifier::predict_one(std::span<const double> row) const {
  std::size_t legit_votes = 0;
  for (std::size_t i : neighbours(row)) legit_votes += labels_[i] == 1 ? 1 : 0;
  return 2 * legit_votes > params_.k ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

GaussianNb::GaussianNb(GaussianNbParams params, std::array<ClassStats, 2> stats, double epsilon)
    : params_(params), stats_(std::move(stats)), epsilon_(epsilon) {
  validate(ClassifierKind{params_});
  if (stats_[0].mean.size() != stats_[1].mean.size()) {
    throw ShapeError("naive Bayes class statistics disagree on feature count");
  }
  for (const auto& s : stats_) {
    if (s.mean.size() != s.variance.size()) throw ShapeError("mean/variance length mismatch");
    for (double v : s.variance) {
      if (!(v > 0.0)) throw DataError("naive Bayes variances must be positive");
    }
  }
}

GaussianNb GaussianNb::fit(GaussianNbParams params, const Matrix& rows,
                           std::span<const int> labels) {
  validate(ClassifierKind{params});
  check_training_set(rows, labels);
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();

  // Smoothing term scales with the widest feature variance of the whole set.
  double max_var = 0.0;
  for (std::size_t f = 0; f < d; ++f) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += rows(i, f);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (rows(i, f) - mean) * (rows(i, f) - mean);
    max_var = std::max(max_var, var / static_cast<double>(n));
  }
  double epsilon = params.var_smoothing * max_var;
  if (epsilon <= 0.0) epsilon = params.var_smoothing;

  std::array<ClassStats, 2> stats;
  for (int c = 0; c < 2; ++c) {
    auto& s = stats[c];
    s.mean.assign(d, 0.0);
    s.variance.assign(d, 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != c) continue;
      ++count;
      for (std::size_t f = 0; f < d; ++f) s.mean[f] += rows(i, f);
    }
    for (double& m : s.mean) m /= static_cast<double>(count);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != c) continue;
      for (std::size_t f = 0; f < d; ++f) {
        const double diff = rows(i, f) - s.mean[f];
        s.variance[f] += diff * diff;
      }
    }
    for (double& v : s.variance) v = v / static_cast<double>(count) + epsilon;
    s.log_prior = std::log(static_cast<double>(count) / static_cast<double>(n));
  }
  return GaussianNb(params, std::move(stats), epsilon);
}

std::array<double, 2> GaussianNb::joint_log_likelihood(std::span<const double> row) const {
  check_width(feature_count(), row.size());
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    const auto& s = stats_[c];
    double ll = s.log_prior;
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double diff = row[f] - s.mean[f];
      ll -= 0.5 * (std::log(2.0 * std::numbers::pi * s.variance[f]) + diff * diff / s.variance[f]);
    }
    out[c] = ll;
  }
  return out;
}

int GaussianNb::predict_one(std::span<const double> row) const {
  const auto ll = joint_log_likelihood(row);
  return ll[1] > ll[0] ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Decision tree

double gini(std::size_t zeros, std::size_t ones) {
  const double n = static_cast<double>(zeros + ones);
  if (n == 0.0) return 0.0;
  const double p0 = static_cast<double>(zeros) / n;
  const double p1 = static_cast<double>(ones) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

std::optional<GiniSplit> best_gini_split(const Matrix& rows, std::span<const int> labels,
                                         std::span<const std::size_t> subset) {
  const std::size_t n = subset.size();
  if (n < 2) return std::nullopt;
  std::array<std::size_t, 2> total{};
  for (std::size_t i : subset) ++total[static_cast<std::size_t>(labels[i])];

  std::optional<GiniSplit> best;
  std::vector<std::pair<double, int>> column(n);
  for (std::size_t f = 0; f < rows.cols(); ++f) {
    for (std::size_t j = 0; j < n; ++j) column[j] = {rows(subset[j], f), labels[subset[j]]};
    std::sort(column.begin(), column.end());
    std::array<std::size_t, 2> left{};
    for (std::size_t j = 0; j + 1 < n; ++j) {
      ++left[static_cast<std::size_t>(column[j].second)];
      const double lo = column[j].first;
      const double hi = column[j + 1].first;
      if (!(lo < hi)) continue;
      const std::size_t nl = j + 1;
      const std::size_t nr = n - nl;
      const double impurity =
          (static_cast<double>(nl) * gini(left[0], left[1]) +
           static_cast<double>(nr) * gini(total[0] - left[0], total[1] - left[1])) /
          static_cast<double>(n);
      // Near-equal impurities count as ties so rounding cannot reorder them.
      if (!best || impurity < best->weighted_impurity - 1e-12) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = GiniSplit{static_cast<int>(f), threshold, impurity};
      }
    }
  }
  return best;
}

DecisionTree::DecisionTree(DecisionTreeParams params, std::vector<Node> nodes,
                           std::size_t feature_count)
    : params_(params), nodes_(std::move(nodes)), feature_count_(feature_count) {
  validate(ClassifierKind{params_});
  if (nodes_.empty()) throw DataError("a decision tree needs at least one node");
  const int n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.class_counts[0] + node.class_counts[1] == 0) {
      throw DataError("decision tree nodes must be non-empty");
    }
    if (!node.is_leaf() &&
        (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n ||
         static_cast<std::size_t>(node.feature) >= feature_count_)) {
      throw DataError("decision tree node has invalid children or feature");
    }
  }
}

DecisionTree DecisionTree::fit(DecisionTreeParams params, const Matrix& rows,
                               std::span<const int> labels) {
  validate(ClassifierKind{params});
  check_training_set(rows, labels);
  std::vector<Node> nodes;

  auto grow = [&](auto&& self, std::vector<std::size_t> subset, std::size_t depth) -> int {
    Node node;
    for (std::size_t i : subset) ++node.class_counts[static_cast<std::size_t>(labels[i])];
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(node);
    const bool pure = node.class_counts[0] == 0 || node.class_counts[1] == 0;
    const bool depth_capped = params.max_depth && depth >= *params.max_depth;
    if (pure || depth_capped || subset.size() < params.min_samples_split) return id;
    const auto split = best_gini_split(rows, labels, subset);
    if (!split) return id;  // identical rows with mixed labels

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : subset) {
      (rows(i, static_cast<std::size_t>(split->feature)) <= split->threshold ? left : right)
          .push_back(i);
    }
    subset.clear();
    subset.shrink_to_fit();
    const int l = self(self, std::move(left), depth + 1);
    const int r = self(self, std::move(right), depth + 1);
    nodes[static_cast<std::size_t>(id)].feature = split->feature;
    nodes[static_cast<std::size_t>(id)].threshold = split->threshold;
    nodes[static_cast<std::size_t>(id)].left = l;
    nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  };

  std::vector<std::size_t> all(rows.rows());
  std::iota(all.begin(), all.end(), 0);
  grow(grow, std::move(all), 0);
  return DecisionTree(params, std::move(nodes), rows.cols());
}

int DecisionTree::predict_one(std::span<const double> row) const {
  check_width(feature_count_, row.size());
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const Node& n = nodes_[at];
    at = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                           : n.right);
  }
  return nodes_[at].majority();
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const Node& n = nodes_[at];
    if (!n.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(n.left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(n.right), d + 1);
    }
  }
  return deepest;
}

// ---------------------------------------------------------------------------

TrainedClassifier fit(const ClassifierKind& kind, const Matrix& rows, std::span<const int> labels) {
  return std::visit(
      overloaded{
          [&](const KnnParams& p) -> TrainedClassifier {
            return KnnClassifier(p, rows, std::vector<int>(labels.begin(), labels.end()));
          },
          [&](const GaussianNbParams& p) -> TrainedClassifier {
            return GaussianNb::fit(p, rows, labels);
          },
          [&](const DecisionTreeParams& p) -> TrainedClassifier {
            return DecisionTree::fit(p, rows, labels);
          },
      },
      kind);
}

std::vector<int> predict(const TrainedClassifier& model, const Matrix& rows) {
  std::vector<int> out;
  out.reserve(rows.rows());
  std::visit(
      [&](const auto& m) {
        for (std::size_t i = 0; i < rows.rows(); ++i) out.push_back(m.predict_one(rows.row(i)));
      },
      model);
  return out;
}

}  // namespace mcsguard
