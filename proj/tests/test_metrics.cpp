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

#include <random>

#include "doctest.h"
#include "mcsguard/error.hpp"
#include "mcsguard/metrics.hpp"

using namespace mcsguard;

namespace {

CascadeVerdict verdict(Provenance o, Disposition d) {
  CascadeVerdict v;
  v.origin = o;
  v.final_disposition = d;
  v.disc_prediction = d == Disposition::eliminated_by_discriminator ? DiscDecision::adversarial
                                                                     : DiscDecision::real;
  v.classifier_prediction = d == Disposition::eliminated_by_discriminator
                                ? ClassifierDecision::not_evaluated
                            : d == Disposition::accepted ? ClassifierDecision::legitimate
                                                         : ClassifierDecision::fake;
  return v;
}

RoundCounts random_counts(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, 500);
  RoundCounts c;
  c.da_dis = u(rng);
  c.da_cla = u(rng);
  c.adversarial_as_real = c.da_cla + u(rng);
  c.total_adversarial = c.da_dis + c.adversarial_as_real;
  if (c.total_adversarial == 0) c.total_adversarial = 1;
  c.do_dis = u(rng);
  c.do_cla = u(rng);
  c.total_original_attacks = c.do_dis + c.do_cla + u(rng) + 1;
  return c;
}

}  // namespace

TEST_CASE("tally counts every cell") {
  std::vector<CascadeVerdict> v = {
      verdict(Provenance::original_fake, Disposition::eliminated_by_discriminator),
      verdict(Provenance::original_fake, Disposition::eliminated_by_classifier),
      verdict(Provenance::original_fake, Disposition::accepted),
      verdict(Provenance::legitimate, Disposition::accepted),
      verdict(Provenance::legitimate, Disposition::eliminated_by_discriminator),
      verdict(Provenance::adversarial_fake, Disposition::eliminated_by_discriminator),
      verdict(Provenance::adversarial_fake, Disposition::eliminated_by_discriminator),
      verdict(Provenance::adversarial_fake, Disposition::eliminated_by_classifier),
      verdict(Provenance::adversarial_fake, Disposition::accepted),
  };
  const RoundCounts c = tally(v);
  CHECK(c.real_as_real_original_fake == 2);
  CHECK(c.real_as_adversarial_original_fake == 1);
  CHECK(c.real_as_real_legitimate == 1);
  CHECK(c.real_as_adversarial_legitimate == 1);
  CHECK(c.adversarial_as_real == 2);
  CHECK(c.adversarial_as_adversarial == 2);
  CHECK(c.da_dis == 2);
  CHECK(c.da_cla == 1);
  CHECK(c.do_dis == 1);
  CHECK(c.do_cla == 1);
  CHECK(c.total_adversarial == 4);
  CHECK(c.total_original_attacks == 3);
  CHECK(c.total_legitimate == 2);
  CHECK(c.da_dis + c.adversarial_as_real == c.total_adversarial);
  CHECK(c.do_dis == c.real_as_adversarial_original_fake);
  CHECK(aadr(c) == 0.75);
  CHECK(oadr(c) == doctest::Approx(2.0 / 3.0));
  CHECK(legitimate_loss_rate(c) == 0.5);
}

TEST_CASE("rates from published averaged counts") {
  RoundCounts c;
  c.total_adversarial = 2000;
  c.total_original_attacks = 391;
  c.da_dis = 1949.3;
  c.da_cla = 50.7;
  c.do_dis = 215.9;
  c.do_cla = 175.1;
  CHECK(aadr(c) == doctest::Approx(1.0));
  CHECK(oadr(c) == doctest::Approx(1.0));
  c.da_dis = 1950;
  c.da_cla = 0;
  CHECK(aadr(c) == doctest::Approx(0.975));
  CHECK(aasr(c) == doctest::Approx(0.025));
  c.do_cla = 24.5;
  CHECK(oadr(c) == doctest::Approx(0.615).epsilon(0.001));
  c.da_dis = c.da_cla = c.do_dis = c.do_cla = 0;
  CHECK(aadr(c) == 0.0);
  CHECK(oadr(c) == 0.0);
}

TEST_CASE("zero denominators are errors") {
  RoundCounts c;
  CHECK_THROWS_AS(aadr(c), DataError);
  CHECK_THROWS_AS(aasr(c), DataError);
  CHECK_THROWS_AS(oadr(c), DataError);
  CHECK(tally(std::vector<CascadeVerdict>{}) == RoundCounts{});
}

TEST_CASE("identities over fuzzed counts") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    RoundCounts c = random_counts(rng);
    CHECK(std::abs(aasr(c) + aadr(c) - 1.0) <= 1e-9);
    const double before = aadr(c);
    if (c.adversarial_as_real > c.da_cla) {
      c.da_cla += 1;
      CHECK(aadr(c) >= before);
    }
  }
}

TEST_CASE("averaging rounds") {
  RoundCounts a, b;
  a.total_adversarial = b.total_adversarial = 2000;
  a.total_original_attacks = b.total_original_attacks = 391;
  a.da_dis = 1948;
  b.da_dis = 1950;
  const std::vector<RoundCounts> two = {a, b};
  CHECK(average_rounds(two).da_dis == 1949);
  const std::vector<RoundCounts> one = {a};
  CHECK(average_rounds(one) == a);
  b.total_adversarial = 1999;
  const std::vector<RoundCounts> bad = {a, b};
  CHECK_THROWS_AS(average_rounds(bad), DataError);
  CHECK_THROWS_AS(average_rounds(std::vector<RoundCounts>{}), DataError);

  std::mt19937_64 rng(13);
  std::vector<RoundCounts> many;
  double sum_da = 0, sum_do_cla = 0;
  for (int i = 0; i < 20; ++i) {
    RoundCounts c = random_counts(rng);
    c.total_adversarial = 5000;
    c.total_original_attacks = 2000;
    sum_da += c.da_dis;
    sum_do_cla += c.do_cla;
    many.push_back(c);
  }
  const RoundCounts m = average_rounds(many);
  CHECK(m.da_dis == doctest::Approx(sum_da / 20).epsilon(1e-15));
  CHECK(m.do_cla == doctest::Approx(sum_do_cla / 20).epsilon(1e-15));
}

TEST_CASE("summaries decompose by level") {
  RoundCounts c;
  c.total_adversarial = 2000;
  c.total_original_attacks = 391;
  c.total_legitimate = 2506;
  c.da_dis = 1949.3;
  c.da_cla = 50.7;
  c.do_dis = 215.9;
  c.do_cla = 129.5;
  c.legitimate_eliminated_by_discriminator = 414.9;
  const std::vector<RoundCounts> rounds = {c};
  const auto r = summarize("knn", Architecture::cascade, rounds);
  CHECK(r.oadr.discriminator == doctest::Approx(0.552).epsilon(0.001));
  CHECK(r.oadr.classifier == doctest::Approx(0.331).epsilon(0.001));
  CHECK(r.oadr.final == doctest::Approx(r.oadr.discriminator + r.oadr.classifier));
  CHECK(r.aadr.final + r.aasr == doctest::Approx(1.0));
  CHECK(r.legitimate_loss.discriminator == doctest::Approx(0.1656).epsilon(0.001));

  MetricReport report;
  report.results.push_back(r);
  report.rounds_used = {0};
  CHECK(report.find("knn", Architecture::cascade) != nullptr);
  CHECK(report.find("knn", Architecture::flat) == nullptr);
  CHECK(report_json(report) == report_json(report));
  CHECK(report_csv(report).find("knn,cascade,1,") != std::string::npos);
}
