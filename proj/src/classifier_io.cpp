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

#include <fmt/format.h>
#include "json.hpp"

#include "mcsguard/classifiers.hpp"
#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"

namespace mcsguard {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json to_json(const KnnClassifier& m) {
  return {{"params", {{"k", m.params().k}}},
          {"feature_count", m.feature_count()},
          {"row_count", m.rows().rows()}};
}

json to_json(const GaussianNb& m) {
  json classes = json::array();
  for (const auto& s : m.stats()) {
    classes.push_back({{"log_prior", s.log_prior}, {"mean", s.mean}, {"variance", s.variance}});
  }
  return {{"params", {{"var_smoothing", m.params().var_smoothing}}},
          {"epsilon", m.epsilon()},
          {"classes", classes}};
}

json to_json(const DecisionTree& m) {
  json params = {{"min_samples_split", m.params().min_samples_split}};
  params["max_depth"] = m.params().max_depth ? json(*m.params().max_depth) : json(nullptr);
  json nodes = json::array();
  for (const auto& n : m.nodes()) {
    nodes.push_back(
        {n.feature, n.threshold, n.left, n.right, n.class_counts[0], n.class_counts[1]});
  }
  return {{"params", params}, {"feature_count", m.feature_count()}, {"nodes", nodes}};
}

TrainedClassifier from_json(const json& j, const Matrix* knn_rows, std::span<const int> knn_labels,
                            const std::string& path) {
  const std::string kind = j.at("kind").get<std::string>();
  const json& p = j.at("params");
  if (kind == "knn") {
    if (knn_rows == nullptr) {
      throw IoError(fmt::format("{}: kNN checkpoint needs its training rows", path));
    }
    if (knn_rows->rows() != j.at("row_count").get<std::size_t>() ||
        knn_rows->cols() != j.at("feature_count").get<std::size_t>()) {
      throw IoError(fmt::format("{}: supplied rows do not match the checkpoint shape", path));
    }
    return KnnClassifier(KnnParams{p.at("k").get<std::size_t>()}, *knn_rows,
                         std::vector<int>(knn_labels.begin(), knn_labels.end()));
  }
  if (kind == "nb") {
    std::array<GaussianNb::ClassStats, 2> stats;
    const json& classes = j.at("classes");
    if (classes.size() != 2) throw IoError(fmt::format("{}: expected two classes", path));
    for (std::size_t c = 0; c < 2; ++c) {
      stats[c].log_prior = classes[c].at("log_prior").get<double>();
      stats[c].mean = classes[c].at("mean").get<std::vector<double>>();
      stats[c].variance = classes[c].at("variance").get<std::vector<double>>();
    }
    return GaussianNb(GaussianNbParams{p.at("var_smoothing").get<double>()}, std::move(stats),
                      j.at("epsilon").get<double>());
  }
  if (kind == "dt") {
    DecisionTreeParams params;
    params.min_samples_split = p.at("min_samples_split").get<std::size_t>();
    if (!p.at("max_depth").is_null()) params.max_depth = p.at("max_depth").get<std::size_t>();
    std::vector<DecisionTree::Node> nodes;
    for (const json& n : j.at("nodes")) {
      if (n.size() != 6) throw IoError(fmt::format("{}: malformed tree node", path));
      DecisionTree::Node node;
      node.feature = n[0].get<int>();
      node.threshold = n[1].get<double>();
      node.left = n[2].get<int>();
      node.right = n[3].get<int>();
      node.class_counts = {n[4].get<std::size_t>(), n[5].get<std::size_t>()};
      nodes.push_back(node);
    }
    return DecisionTree(params, std::move(nodes), j.at("feature_count").get<std::size_t>());
  }
  throw IoError(fmt::format("{}: unknown classifier kind '{}'", path, kind));
}

}  // namespace

void save_classifier(const std::string& path, const TrainedClassifier& model,
                     const std::string& dataset_reference) {
  json j = std::visit([](const auto& m) { return to_json(m); }, model);
  j["format"] = "mcsguard-classifier";
  j["version"] = kFormatVersion;
  j["kind"] = std::string(classifier_name(model));
  if (!dataset_reference.empty()) j["dataset"] = dataset_reference;
  write_text_file(path, j.dump(2) + "\n");
}

TrainedClassifier load_classifier(const std::string& path, const Matrix* knn_rows,
                                  std::span<const int> knn_labels) {
  json j;
  try {
    j = json::parse(read_text_file(path));
    if (j.at("format") != "mcsguard-classifier" || j.at("version") != kFormatVersion) {
      throw IoError(fmt::format("{}: not a supported classifier checkpoint", path));
    }
    return from_json(j, knn_rows, knn_labels, path);
  } catch (const json::exception& e) {
    throw IoError(fmt::format("{}: {}", path, e.what()));
  } catch (const DataError& e) {
    throw IoError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace mcsguard
