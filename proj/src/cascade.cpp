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

#include "mcsguard/cascade.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"

namespace mcsguard {

std::size_t MixedDataset::count(Provenance p) const {
  return static_cast<std::size_t>(std::count(origin.begin(), origin.end(), p));
}

MixedDataset build_mixed(const Matrix& real_rows, std::span<const Provenance> real_origin,
                         const Matrix& synthetic) {
  if (real_rows.rows() != real_origin.size()) {
    throw ShapeError(fmt::format("{} real rows but {} origin tags", real_rows.rows(),
                                 real_origin.size()));
  }
  if (synthetic.rows() > 0 && real_rows.rows() > 0 && synthetic.cols() != real_rows.cols()) {
    throw ShapeError(fmt::format("synthetic rows have {} features, real rows {}", synthetic.cols(),
                                 real_rows.cols()));
  }
  MixedDataset mixed;
  mixed.rows = synthetic.rows() == 0 ? real_rows
               : real_rows.rows() == 0 ? synthetic
                                       : vstack(real_rows, synthetic);
  mixed.origin.reserve(mixed.rows.rows());
  for (Provenance p : real_origin) {
    if (p == Provenance::adversarial_fake) {
      throw DataError("real rows cannot carry the adversarial_fake tag");
    }
    mixed.origin.push_back(p);
  }
  mixed.origin.insert(mixed.origin.end(), synthetic.rows(), Provenance::adversarial_fake);
  mixed.disc_label.reserve(mixed.origin.size());
  for (Provenance p : mixed.origin) {
    mixed.disc_label.push_back(p == Provenance::adversarial_fake ? 0 : 1);
  }
  return mixed;
}

MixedDataset build_mixed(const DatasetSplit& split, const Matrix& synthetic) {
  return build_mixed(split.test_features, split.test_provenance, synthetic);
}

std::string_view to_string(DiscDecision d) {
  return d == DiscDecision::real ? "real" : "adversarial";
}

std::string_view to_string(ClassifierDecision d) {
  switch (d) {
    case ClassifierDecision::legitimate: return "legitimate";
    case ClassifierDecision::fake: return "fake";
    case ClassifierDecision::not_evaluated: return "not_evaluated";
  }
  return "?";
}

std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::accepted: return "accepted";
    case Disposition::eliminated_by_discriminator: return "eliminated_by_discriminator";
    case Disposition::eliminated_by_classifier: return "eliminated_by_classifier";
  }
  return "?";
}

std::string_view to_string(Architecture a) {
  return a == Architecture::flat ? "flat" : "cascade";
}

std::vector<CascadeVerdict> classify_with_probabilities(const MixedDataset& mixed,
                                                        std::span<const double> disc_probability,
                                                        const TrainedClassifier& clf,
                                                        double threshold) {
  if (disc_probability.size() != mixed.size()) {
    throw ShapeError(fmt::format("{} probabilities for {} rows", disc_probability.size(),
                                 mixed.size()));
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("discriminator threshold must lie in [0, 1]");
  }
  std::vector<CascadeVerdict> verdicts(mixed.size());
  std::vector<std::size_t> forwarded;
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    auto& v = verdicts[i];
    v.index = i;
    v.origin = mixed.origin[i];
    v.disc_probability = disc_probability[i];
    if (disc_probability[i] >= threshold) {
      v.disc_prediction = DiscDecision::real;
      forwarded.push_back(i);
    } else {
      v.disc_prediction = DiscDecision::adversarial;
      v.classifier_prediction = ClassifierDecision::not_evaluated;
      v.final_disposition = Disposition::eliminated_by_discriminator;
    }
  }
  if (forwarded.empty()) return verdicts;

  const std::vector<int> labels = predict(clf, mixed.rows.gather_rows(forwarded));
  for (std::size_t j = 0; j < forwarded.size(); ++j) {
    auto& v = verdicts[forwarded[j]];
    if (labels[j] == kLegitimate) {
      v.classifier_prediction = ClassifierDecision::legitimate;
      v.final_disposition = Disposition::accepted;
    } else {
      v.classifier_prediction = ClassifierDecision::fake;
      v.final_disposition = Disposition::eliminated_by_classifier;
    }
  }
  return verdicts;
}

std::vector<CascadeVerdict> classify_mixed(const MixedDataset& mixed, const GanModel& gan,
                                           const TrainedClassifier& clf, double threshold) {
  if (!gan.trained) throw DataError("discriminator has not been trained");
  return classify_with_probabilities(mixed, discriminate(gan, mixed.rows), clf, threshold);
}

std::vector<CascadeVerdict> classify_flat(const MixedDataset& mixed, const TrainedClassifier& clf) {
  const std::vector<double> ones(mixed.size(), 1.0);
  return classify_with_probabilities(mixed, ones, clf, kDefaultDiscThreshold);
}

std::string verdict_csv_header() {
  return "index,origin,disc_probability,disc_prediction,classifier_prediction,final_disposition";
}

std::string verdict_csv_row(const CascadeVerdict& v) {
  return fmt::format("{},{},{},{},{},{}", v.index, to_string(v.origin), v.disc_probability,
                     to_string(v.disc_prediction), to_string(v.classifier_prediction),
                     to_string(v.final_disposition));
}

void write_verdicts_csv(const std::string& path, std::span<const CascadeVerdict> verdicts) {
  std::string out = verdict_csv_header() + "\n";
  for (const auto& v : verdicts) {
    out += verdict_csv_row(v);
    out += '\n';
  }
  write_text_file(path, out);
}

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const E (&values)[N], const std::string& path) {
  for (E e : values) {
    if (to_string(e) == s) return e;
  }
  throw IoError(fmt::format("{}: unknown value '{}'", path, s));
}

}  // namespace

std::vector<CascadeVerdict> read_verdicts_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != verdict_csv_header()) {
    throw IoError(fmt::format("{}: unexpected verdict header", path));
  }
  constexpr DiscDecision kDisc[] = {DiscDecision::real, DiscDecision::adversarial};
  constexpr ClassifierDecision kClf[] = {ClassifierDecision::legitimate, ClassifierDecision::fake,
                                         ClassifierDecision::not_evaluated};
  constexpr Disposition kDisp[] = {Disposition::accepted, Disposition::eliminated_by_discriminator,
                                   Disposition::eliminated_by_classifier};
  std::vector<CascadeVerdict> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw IoError(fmt::format("{}: expected 6 fields", path));
    CascadeVerdict v;
    auto [p1, e1] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), v.index);
    auto [p2, e2] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), v.disc_probability);
    if (e1 != std::errc() || e2 != std::errc()) {
      throw IoError(fmt::format("{}: bad number in '{}'", path, line));
    }
    try {
      v.origin = provenance_from_string(f[1]);
    } catch (const Error&) {
      throw IoError(fmt::format("{}: unknown origin '{}'", path, f[1]));
    }
    v.disc_prediction = parse_enum(f[3], kDisc, path);
    v.classifier_prediction = parse_enum(f[4], kClf, path);
    v.final_disposition = parse_enum(f[5], kDisp, path);
    out.push_back(v);
  }
  return out;
}

}  // namespace mcsguard
