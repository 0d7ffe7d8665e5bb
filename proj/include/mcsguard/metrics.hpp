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

// Detection metrics over cascade verdicts.
//
//   AADR = (DA_DIS + DA_CLA) / adversarial rows      AASR = 1 - AADR
//   OADR = (DO_DIS + DO_CLA) / original fake rows
//
// where DA_* / DO_* count adversarial / original fake rows eliminated by the
// discriminator (DIS) or the classifier (CLA). Counts are doubles so that
// averages over rounds keep their fractional part.

#ifndef MCSGUARD_METRICS_HPP_
#define MCSGUARD_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mcsguard/cascade.hpp"

namespace mcsguard {

struct RoundCounts {
  // Discriminator prediction x origin.
  double real_as_real_original_fake = 0.0;
  double real_as_real_legitimate = 0.0;
  double adversarial_as_real = 0.0;
  double real_as_adversarial_original_fake = 0.0;
  double real_as_adversarial_legitimate = 0.0;
  double adversarial_as_adversarial = 0.0;

  double da_dis = 0.0;
  double da_cla = 0.0;
  double do_dis = 0.0;
  double do_cla = 0.0;
  double legitimate_eliminated_by_discriminator = 0.0;
  double legitimate_eliminated_by_classifier = 0.0;

  double total_adversarial = 0.0;
  double total_original_attacks = 0.0;
  double total_legitimate = 0.0;

  friend bool operator==(const RoundCounts&, const RoundCounts&) = default;
};

RoundCounts tally(std::span<const CascadeVerdict> verdicts);

// Throw DataError on a zero denominator.
double aadr(const RoundCounts& c);
double aasr(const RoundCounts& c);
double oadr(const RoundCounts& c);
// Share of legitimate rows eliminated at either level.
double legitimate_loss_rate(const RoundCounts& c);

// Per-cell mean. Throws DataError on an empty list or if the totals differ
// between rounds.
RoundCounts average_rounds(std::span<const RoundCounts> rounds);

// A rate split by the level that produced the detections.
struct StagedRate {
  double discriminator = 0.0;
  double classifier = 0.0;
  double final = 0.0;  // discriminator + classifier

  friend bool operator==(const StagedRate&, const StagedRate&) = default;
};

struct ArchitectureResult {
  std::string classifier;  // "knn", "nb", "dt"
  Architecture architecture = Architecture::cascade;
  std::size_t rounds = 0;
  RoundCounts counts;  // averaged over rounds
  StagedRate aadr;
  double aasr = 0.0;
  StagedRate oadr;
  StagedRate legitimate_loss;
};

ArchitectureResult summarize(std::string classifier, Architecture architecture,
                             std::span<const RoundCounts> rounds);

struct FailedRound {
  std::size_t round = 0;
  std::string reason;
};

struct MetricReport {
  std::vector<ArchitectureResult> results;
  std::vector<std::size_t> rounds_used;
  std::vector<FailedRound> failed_rounds;

  const ArchitectureResult* find(std::string_view classifier, Architecture architecture) const;
};

// Stable, timing-free renderings.
std::string report_json(const MetricReport& report);
std::string report_csv(const MetricReport& report);
std::string result_csv(const ArchitectureResult& result);

}  // namespace mcsguard

#endif  // MCSGUARD_METRICS_HPP_
