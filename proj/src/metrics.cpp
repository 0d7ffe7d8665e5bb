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

#include "mcsguard/metrics.hpp"

#include <fmt/format.h>

#include "json.hpp"
#include "mcsguard/error.hpp"

namespace mcsguard {

RoundCounts tally(std::span<const CascadeVerdict> verdicts) {
  RoundCounts c;
  for (const auto& v : verdicts) {
    const bool kept = v.disc_prediction == DiscDecision::real;
    const bool by_disc = v.final_disposition == Disposition::eliminated_by_discriminator;
    const bool by_clf = v.final_disposition == Disposition::eliminated_by_classifier;
    switch (v.origin) {
      case Provenance::original_fake:
        c.total_original_attacks += 1;
        (kept ? c.real_as_real_original_fake : c.real_as_adversarial_original_fake) += 1;
        c.do_dis += by_disc ? 1 : 0;
        c.do_cla += by_clf ? 1 : 0;
        break;
      case Provenance::legitimate:
        c.total_legitimate += 1;
        (kept ? c.real_as_real_legitimate : c.real_as_adversarial_legitimate) += 1;
        c.legitimate_eliminated_by_discriminator += by_disc ? 1 : 0;
        c.legitimate_eliminated_by_classifier += by_clf ? 1 : 0;
        break;
      case Provenance::adversarial_fake:
        c.total_adversarial += 1;
        (kept ? c.adversarial_as_real : c.adversarial_as_adversarial) += 1;
        c.da_dis += by_disc ? 1 : 0;
        c.da_cla += by_clf ? 1 : 0;
        break;
    }
  }
  return c;
}

double aadr(const RoundCounts& c) {
  if (c.total_adversarial <= 0.0) throw DataError("AADR needs at least one adversarial row");
  return (c.da_dis + c.da_cla) / c.total_adversarial;
}

double aasr(const RoundCounts& c) { return 1.0 - aadr(c); }

double oadr(const RoundCounts& c) {
  if (c.total_original_attacks <= 0.0) throw DataError("OADR needs at least one original fake");
  return (c.do_dis + c.do_cla) / c.total_original_attacks;
}

double legitimate_loss_rate(const RoundCounts& c) {
  if (c.total_legitimate <= 0.0) throw DataError("no legitimate rows");
  return (c.legitimate_eliminated_by_discriminator + c.legitimate_eliminated_by_classifier) /
         c.total_legitimate;
}

RoundCounts average_rounds(std::span<const RoundCounts> rounds) {
  if (rounds.empty()) throw DataError("no rounds to average");
  RoundCounts sum;
  for (const auto& r : rounds) {
    if (r.total_adversarial != rounds[0].total_adversarial ||
        r.total_original_attacks != rounds[0].total_original_attacks ||
        r.total_legitimate != rounds[0].total_legitimate) {
      throw DataError("rounds disagree on their totals");
    }
    sum.real_as_real_original_fake += r.real_as_real_original_fake;
    sum.real_as_real_legitimate += r.real_as_real_legitimate;
    sum.adversarial_as_real += r.adversarial_as_real;
    sum.real_as_adversarial_original_fake += r.real_as_adversarial_original_fake;
    sum.real_as_adversarial_legitimate += r.real_as_adversarial_legitimate;
    sum.adversarial_as_adversarial += r.adversarial_as_adversarial;
    sum.da_dis += r.da_dis;
    sum.da_cla += r.da_cla;
    sum.do_dis += r.do_dis;
    sum.do_cla += r.do_cla;
    sum.legitimate_eliminated_by_discriminator += r.legitimate_eliminated_by_discriminator;
    sum.legitimate_eliminated_by_classifier += r.legitimate_eliminated_by_classifier;
  }
  const double n = static_cast<double>(rounds.size());
  RoundCounts m;
  m.real_as_real_original_fake = sum.real_as_real_original_fake / n;
  m.real_as_real_legitimate = sum.real_as_real_legitimate / n;
  m.adversarial_as_real = sum.adversarial_as_real / n;
  m.real_as_adversarial_original_fake = sum.real_as_adversarial_original_fake / n;
  m.real_as_adversarial_legitimate = sum.real_as_adversarial_legitimate / n;
  m.adversarial_as_adversarial = sum.adversarial_as_adversarial / n;
  m.da_dis = sum.da_dis / n;
  m.da_cla = sum.da_cla / n;
  m.do_dis = sum.do_dis / n;
  m.do_cla = sum.do_cla / n;
  m.legitimate_eliminated_by_discriminator = sum.legitimate_eliminated_by_discriminator / n;
  m.legitimate_eliminated_by_classifier = sum.legitimate_eliminated_by_classifier / n;
  m.total_adversarial = rounds[0].total_adversarial;
  m.total_original_attacks = rounds[0].total_original_attacks;
  m.total_legitimate = rounds[0].total_legitimate;
  return m;
}

namespace {

StagedRate staged(double by_disc, double by_clf, double total) {
  if (total <= 0.0) return {};
  return {by_disc / total, by_clf / total, (by_disc + by_clf) / total};
}

}  // namespace

ArchitectureResult summarize(std::string classifier, Architecture architecture,
                             std::span<const RoundCounts> rounds) {
  ArchitectureResult r;
  r.classifier = std::move(classifier);
  r.architecture = architecture;
  r.rounds = rounds.size();
  r.counts = average_rounds(rounds);
  const auto& c = r.counts;
  r.aadr = staged(c.da_dis, c.da_cla, c.total_adversarial);
  r.aasr = c.total_adversarial > 0.0 ? aasr(c) : 0.0;
  r.oadr = staged(c.do_dis, c.do_cla, c.total_original_attacks);
  r.legitimate_loss = staged(c.legitimate_eliminated_by_discriminator,
                             c.legitimate_eliminated_by_classifier, c.total_legitimate);
  return r;
}

const ArchitectureResult* MetricReport::find(std::string_view classifier,
                                             Architecture architecture) const {
  for (const auto& r : results) {
    if (r.classifier == classifier && r.architecture == architecture) return &r;
  }
  return nullptr;
}

namespace {

using nlohmann::ordered_json;

ordered_json staged_json(const StagedRate& s) {
  return {{"discriminator", s.discriminator}, {"classifier", s.classifier}, {"final", s.final}};
}

ordered_json counts_json(const RoundCounts& c) {
  return {
      {"real_as_real", {{"original_fake", c.real_as_real_original_fake},
                        {"legitimate", c.real_as_real_legitimate}}},
      {"adversarial_as_real", {{"adversarial_fake", c.adversarial_as_real}}},
      {"real_as_adversarial", {{"original_fake", c.real_as_adversarial_original_fake},
                               {"legitimate", c.real_as_adversarial_legitimate}}},
      {"adversarial_as_adversarial", {{"adversarial_fake", c.adversarial_as_adversarial}}},
      {"da_dis", c.da_dis},
      {"da_cla", c.da_cla},
      {"do_dis", c.do_dis},
      {"do_cla", c.do_cla},
      {"legitimate_eliminated_by_discriminator", c.legitimate_eliminated_by_discriminator},
      {"legitimate_eliminated_by_classifier", c.legitimate_eliminated_by_classifier},
      {"total_adversarial", c.total_adversarial},
      {"total_original_attacks", c.total_original_attacks},
      {"total_legitimate", c.total_legitimate},
  };
}

constexpr const char* kCsvHeader =
    "classifier,architecture,rounds,aasr,aadr_discriminator,aadr_classifier,aadr,"
    "oadr_discriminator,oadr_classifier,oadr,legitimate_loss_discriminator,"
    "legitimate_loss_classifier,legitimate_loss,real_as_real_original_fake,"
    "real_as_real_legitimate,adversarial_as_real,real_as_adversarial_original_fake,"
    "real_as_adversarial_legitimate,adversarial_as_adversarial,da_dis,da_cla,do_dis,do_cla,"
    "total_adversarial,total_original_attacks,total_legitimate\n";

std::string csv_line(const ArchitectureResult& r) {
  const auto& c = r.counts;
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
      r.classifier, to_string(r.architecture), r.rounds, r.aasr, r.aadr.discriminator,
      r.aadr.classifier, r.aadr.final, r.oadr.discriminator, r.oadr.classifier, r.oadr.final,
      r.legitimate_loss.discriminator, r.legitimate_loss.classifier, r.legitimate_loss.final,
      c.real_as_real_original_fake, c.real_as_real_legitimate, c.adversarial_as_real,
      c.real_as_adversarial_original_fake, c.real_as_adversarial_legitimate,
      c.adversarial_as_adversarial, c.da_dis, c.da_cla, c.do_dis, c.do_cla, c.total_adversarial,
      c.total_original_attacks, c.total_legitimate);
}

}  // namespace

std::string report_json(const MetricReport& report) {
  ordered_json results = ordered_json::array();
  for (const auto& r : report.results) {
    results.push_back({
        {"classifier", r.classifier},
        {"architecture", std::string(to_string(r.architecture))},
        {"rounds", r.rounds},
        {"aasr", r.aasr},
        {"aadr", staged_json(r.aadr)},
        {"oadr", staged_json(r.oadr)},
        {"legitimate_loss", staged_json(r.legitimate_loss)},
        {"counts", counts_json(r.counts)},
    });
  }
  ordered_json failed = ordered_json::array();
  for (const auto& f : report.failed_rounds) {
    failed.push_back({{"round", f.round}, {"reason", f.reason}});
  }
  ordered_json j = {
      {"rounds_used", report.rounds_used},
      {"failed_rounds", failed},
      {"results", results},
  };
  return j.dump(2) + "\n";
}

std::string report_csv(const MetricReport& report) {
  std::string out = kCsvHeader;
  for (const auto& r : report.results) out += csv_line(r);
  return out;
}

std::string result_csv(const ArchitectureResult& result) {
  return std::string(kCsvHeader) + csv_line(result);
}

}  // namespace mcsguard
