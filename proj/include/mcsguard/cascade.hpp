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

// Two-level detection over a mixed task set. Level 1 is the GAN
// discriminator: rows it scores below the threshold are eliminated as
// adversarial. Surviving rows go to a binary classifier at level 2, which
// accepts rows it labels legitimate. The flat architecture skips level 1.

#ifndef MCSGUARD_CASCADE_HPP_
#define MCSGUARD_CASCADE_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcsguard/classifiers.hpp"
#include "mcsguard/gan.hpp"
#include "mcsguard/matrix.hpp"
#include "mcsguard/tasks.hpp"

namespace mcsguard {

// Real test rows followed by generator output.
struct MixedDataset {
  Matrix rows;
  std::vector<Provenance> origin;
  std::vector<int> disc_label;  // 1 for real rows, 0 for adversarial_fake

  std::size_t size() const noexcept { return origin.size(); }
  std::size_t count(Provenance p) const;
};

// Throws ShapeError when widths or lengths disagree, DataError if a real row
// is tagged adversarial_fake.
MixedDataset build_mixed(const Matrix& real_rows, std::span<const Provenance> real_origin,
                         const Matrix& synthetic);
MixedDataset build_mixed(const DatasetSplit& split, const Matrix& synthetic);

enum class DiscDecision { real, adversarial };
enum class ClassifierDecision { legitimate, fake, not_evaluated };
enum class Disposition { accepted, eliminated_by_discriminator, eliminated_by_classifier };

std::string_view to_string(DiscDecision d);
std::string_view to_string(ClassifierDecision d);
std::string_view to_string(Disposition d);

enum class Architecture { flat, cascade };
std::string_view to_string(Architecture a);

inline constexpr double kDefaultDiscThreshold = 0.5;

struct CascadeVerdict {
  std::size_t index = 0;
  Provenance origin = Provenance::legitimate;
  double disc_probability = 1.0;
  DiscDecision disc_prediction = DiscDecision::real;
  ClassifierDecision classifier_prediction = ClassifierDecision::not_evaluated;
  Disposition final_disposition = Disposition::accepted;

  friend bool operator==(const CascadeVerdict&, const CascadeVerdict&) = default;
};

// Cascade with externally supplied level-1 probabilities (one per row). A
// row is forwarded when its probability is >= threshold.
std::vector<CascadeVerdict> classify_with_probabilities(const MixedDataset& mixed,
                                                        std::span<const double> disc_probability,
                                                        const TrainedClassifier& clf,
                                                        double threshold = kDefaultDiscThreshold);

// Throws DataError if the GAN has not been trained.
std::vector<CascadeVerdict> classify_mixed(const MixedDataset& mixed, const GanModel& gan,
                                           const TrainedClassifier& clf,
                                           double threshold = kDefaultDiscThreshold);

// Every row goes to the classifier; probability is recorded as 1.
std::vector<CascadeVerdict> classify_flat(const MixedDataset& mixed, const TrainedClassifier& clf);

// "index,origin,disc_probability,disc_prediction,classifier_prediction,final_disposition"
std::string verdict_csv_header();
std::string verdict_csv_row(const CascadeVerdict& v);
void write_verdicts_csv(const std::string& path, std::span<const CascadeVerdict> verdicts);
std::vector<CascadeVerdict> read_verdicts_csv(const std::string& path);

}  // namespace mcsguard

#endif  // MCSGUARD_CASCADE_HPP_
