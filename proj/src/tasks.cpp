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

#include "mcsguard/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mcsguard/error.hpp"
#include "mcsguard/random.hpp"

namespace mcsguard {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::legitimate:
      return "legitimate";
    case Provenance::original_fake:
      return "original_fake";
    case Provenance::adversarial_fake:
      return "adversarial_fake";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "legitimate") return Provenance::legitimate;
  if (s == "original_fake") return Provenance::original_fake;
  if (s == "adversarial_fake") return Provenance::adversarial_fake;
  throw DataError(fmt::format("unknown provenance '{}'", s));
}

ClassProfile default_fake_profile() {
  ClassProfile p;
  p.hour = {0.8, {7, 11}, {12, 17}};
  p.duration = {0.7, {40, 60}, {10, 30}};
  p.battery = {0.8, {7, 10}, {1, 6}};
  return p;
}

ClassProfile default_legitimate_profile() {
  ClassProfile p;
  p.hour = {0.08, {0, 5}, {6, 23}};
  p.duration = {1.0, {10, 60}, {10, 60}};
  p.battery = {1.0, {1, 10}, {1, 10}};
  return p;
}

namespace {

void check_range(const IntRange& r, int lo, int hi, std::string_view what) {
  if (r.lo > r.hi || r.lo < lo || r.hi > hi) {
    throw ConfigError(fmt::format("{} range [{}, {}] must lie within [{}, {}] with lo <= hi", what,
                                  r.lo, r.hi, lo, hi));
  }
}

void check_bands(const TwoBandDistribution& d, int lo, int hi, std::string_view what) {
  if (!(d.p_first >= 0.0 && d.p_first <= 1.0)) {
    throw ConfigError(fmt::format("{} band probability must lie in [0, 1]", what));
  }
  check_range(d.first, lo, hi, what);
  check_range(d.second, lo, hi, what);
}

void check_profile(const ClassProfile& p, int duration_step, std::string_view cls) {
  check_range(p.day, 1, 7, fmt::format("{} day", cls));
  check_range(p.minute, 0, 59, fmt::format("{} minute", cls));
  check_range(p.coverage, 0, 100000, fmt::format("{} coverage", cls));
  check_bands(p.hour, 0, 23, fmt::format("{} hour", cls));
  check_bands(p.battery, 1, 100, fmt::format("{} battery", cls));
  check_bands(p.duration, 1, 24 * 60, fmt::format("{} duration", cls));
  for (const IntRange& r : {p.duration.first, p.duration.second}) {
    if ((r.hi / duration_step) * duration_step < r.lo) {
      throw ConfigError(fmt::format("{} duration band [{}, {}] holds no multiple of {}", cls, r.lo,
                                    r.hi, duration_step));
    }
  }
}

}  // namespace

void GenerationConfig::validate() const {
  if (total_tasks == 0) throw ConfigError("total_tasks must be positive");
  if (!(fake_fraction > 0.0 && fake_fraction < 1.0)) {
    throw ConfigError("fake_fraction must lie strictly between 0 and 1");
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ConfigError("split_ratio must lie strictly between 0 and 1");
  }
  const auto& b = bounding_box;
  if (!(b.lat_min < b.lat_max)) throw ConfigError("bounding box needs lat_min < lat_max");
  if (!(b.lon_min < b.lon_max)) throw ConfigError("bounding box needs lon_min < lon_max");
  if (grid_resolution <= 0) throw ConfigError("grid_resolution must be positive");
  if (on_peak_start < 0 || on_peak_end > 23 || on_peak_start > on_peak_end) {
    throw ConfigError("on-peak window must satisfy 0 <= start <= end <= 23");
  }
  if (!(movement_radius_min >= 0.0 && movement_radius_min <= movement_radius_max)) {
    throw ConfigError("movement radius range is invalid");
  }
  if (duration_step <= 0) throw ConfigError("duration_step must be positive");
  check_profile(fake, duration_step, "fake");
  check_profile(legitimate, duration_step, "legitimate");
  if (test_fake_count.has_value() != test_legitimate_count.has_value()) {
    throw ConfigError("test_fake_count and test_legitimate_count must be set together");
  }
}

std::size_t GenerationConfig::fake_count() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(total_tasks) * fake_fraction));
}

int grid_cell(double latitude, double longitude, const BoundingBox& box, int resolution) {
  auto cell = [resolution](double v, double lo, double hi) {
    const int c = static_cast<int>(std::floor((v - lo) / (hi - lo) * resolution));
    return std::clamp(c, 0, resolution - 1);
  };
  return cell(latitude, box.lat_min, box.lat_max) * resolution +
         cell(longitude, box.lon_min, box.lon_max);
}

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

int uniform_int(Rng& rng, const IntRange& r) { return uniform_int(rng, r.lo, r.hi); }

const IntRange& pick_band(Rng& rng, const TwoBandDistribution& d) {
  return std::bernoulli_distribution(d.p_first)(rng) ? d.first : d.second;
}

int draw_stepped(Rng& rng, const IntRange& r, int step) {
  return step * uniform_int(rng, (r.lo + step - 1) / step, r.hi / step);
}

SensingTask draw_task(Rng& rng, const GenerationConfig& config, std::int64_t id, bool legitimate) {
  const BoundingBox& box = config.bounding_box;
  SensingTask t;
  t.id = id;
  t.legitimate = legitimate;
  t.latitude = std::uniform_real_distribution<double>(box.lat_min, box.lat_max)(rng);
  t.longitude = std::uniform_real_distribution<double>(box.lon_min, box.lon_max)(rng);
  const ClassProfile& p = legitimate ? config.legitimate : config.fake;
  t.day = uniform_int(rng, p.day);
  t.minute = uniform_int(rng, p.minute);
  t.coverage = uniform_int(rng, p.coverage);
  t.movement_radius = std::uniform_real_distribution<double>(config.movement_radius_min,
                                                             config.movement_radius_max)(rng);
  t.hour = uniform_int(rng, pick_band(rng, p.hour));
  t.duration = draw_stepped(rng, pick_band(rng, p.duration), config.duration_step);
  t.battery_pct = uniform_int(rng, pick_band(rng, p.battery));
  t.remaining_time = config.remaining_time == RemainingTimeRule::full_duration
                         ? t.duration
                         : uniform_int(rng, 1, t.duration);
  t.grid_number = grid_cell(t.latitude, t.longitude, box, config.grid_resolution);
  t.on_peak_hour = t.hour >= config.on_peak_start && t.hour <= config.on_peak_end;
  return t;
}

}  // namespace

std::vector<SensingTask> generate_tasks(const GenerationConfig& config) {
  config.validate();
  const std::size_t n = config.total_tasks;
  const std::size_t n_fake = config.fake_count();

  std::vector<bool> legitimate(n, true);
  std::fill_n(legitimate.begin(), n_fake, false);
  Rng label_rng(derive_seed(config.rng_seed, "labels"));
  std::shuffle(legitimate.begin(), legitimate.end(), label_rng);

  Rng rng(derive_seed(config.rng_seed, "features"));
  std::vector<SensingTask> tasks;
  tasks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    tasks.push_back(draw_task(rng, config, static_cast<std::int64_t>(i), legitimate[i]));
  }
  return tasks;
}

// ---------------------------------------------------------------------------

const std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "latitude",       "longitude", "day",      "hour",        "minute",      "duration",
    "remaining_time", "battery_requirement_pct", "coverage", "grid_number", "on_peak_hour",
};

namespace {
constexpr std::size_t kOnPeakFeature = 10;
}

std::array<double, kFeatureCount> raw_features(const SensingTask& t) {
  return {t.latitude,
          t.longitude,
          static_cast<double>(t.day),
          static_cast<double>(t.hour),
          static_cast<double>(t.minute),
          static_cast<double>(t.duration),
          static_cast<double>(t.remaining_time),
          static_cast<double>(t.battery_pct),
          static_cast<double>(t.coverage),
          static_cast<double>(t.grid_number),
          t.on_peak_hour ? 1.0 : 0.0};
}

FeatureScaler::FeatureScaler(std::vector<FeatureRange> ranges) : ranges_(std::move(ranges)) {
  if (ranges_.size() != kFeatureCount) {
    throw ShapeError(fmt::format("scaler needs {} features, got {}", kFeatureCount, ranges_.size()));
  }
}

FeatureScaler FeatureScaler::fit(std::span<const SensingTask> tasks) {
  if (tasks.empty()) throw DataError("cannot fit a scaler on zero tasks");
  std::vector<FeatureRange> ranges(kFeatureCount);
  const auto first = raw_features(tasks.front());
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    ranges[f] = {std::string(kFeatureNames[f]), first[f], first[f]};
  }
  for (const auto& t : tasks) {
    const auto raw = raw_features(t);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      ranges[f].min = std::min(ranges[f].min, raw[f]);
      ranges[f].max = std::max(ranges[f].max, raw[f]);
    }
  }
  // Booleans always map false -> -1, true -> +1.
  ranges[kOnPeakFeature].min = 0.0;
  ranges[kOnPeakFeature].max = 1.0;
  return FeatureScaler(std::move(ranges));
}

double FeatureScaler::encode(std::size_t f, double raw) const {
  const auto& r = ranges_.at(f);
  if (r.max == r.min) return 0.0;
  return 2.0 * (raw - r.min) / (r.max - r.min) - 1.0;
}

double FeatureScaler::decode(std::size_t f, double encoded) const {
  const auto& r = ranges_.at(f);
  if (r.max == r.min) return r.min;
  return (encoded + 1.0) * 0.5 * (r.max - r.min) + r.min;
}

EncodedTasks encode(std::span<const SensingTask> tasks, const std::optional<FeatureScaler>& scaler) {
  if (tasks.empty()) throw DataError("cannot encode an empty task list");
  EncodedTasks out;
  out.scaler = scaler ? *scaler : FeatureScaler::fit(tasks);
  out.features = Matrix(tasks.size(), kFeatureCount);
  out.labels.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto raw = raw_features(tasks[i]);
    auto row = out.features.row(i);
    for (std::size_t f = 0; f < kFeatureCount; ++f) row[f] = out.scaler.encode(f, raw[f]);
    out.labels.push_back(tasks[i].legitimate ? kLegitimate : kFake);
  }
  return out;
}

std::array<double, kFeatureCount> decode_row(std::span<const double> encoded,
                                             const FeatureScaler& scaler) {
  if (encoded.size() != kFeatureCount) {
    throw ShapeError(fmt::format("decode_row: width {} != {}", encoded.size(), kFeatureCount));
  }
  std::array<double, kFeatureCount> raw{};
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    raw[f] = scaler.decode(f, encoded[f]);
    if (f >= 2 && f < kOnPeakFeature) raw[f] = std::round(raw[f]);
  }
  raw[kOnPeakFeature] = encoded[kOnPeakFeature] > 0.0 ? 1.0 : 0.0;
  return raw;
}

// ---------------------------------------------------------------------------

SplitIndices stratified_partition(std::span<const int> labels, double train_ratio,
                                  std::uint64_t seed, std::optional<std::size_t> test_fake,
                                  std::optional<std::size_t> test_legitimate) {
  std::array<std::vector<std::size_t>, 2> members;  // [kFake], [kLegitimate]
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kFake && labels[i] != kLegitimate) {
      throw DataError(fmt::format("label {} at row {} is not 0/1", labels[i], i));
    }
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (members[c].size() < 2) {
      throw DataError(fmt::format("class {} has {} rows; each partition needs at least one", c,
                                  members[c].size()));
    }
  }

  std::array<std::size_t, 2> n_test{};
  if (test_fake && test_legitimate) {
    n_test = {*test_fake, *test_legitimate};
  } else {
    const double n = static_cast<double>(labels.size());
    const auto total_test = static_cast<std::size_t>(std::llround(n * (1.0 - train_ratio)));
    std::array<double, 2> frac{};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
      const double quota = static_cast<double>(total_test) * static_cast<double>(members[c].size()) / n;
      n_test[c] = static_cast<std::size_t>(std::floor(quota));
      frac[c] = quota - std::floor(quota);
      assigned += n_test[c];
    }
    // Largest remainder; the fake class wins an exact tie.
    for (std::size_t left = total_test - assigned; left > 0; --left) {
      const int c = frac[kFake] >= frac[kLegitimate] ? kFake : kLegitimate;
      ++n_test[c];
      frac[c] = -1.0;
    }
    // Keep both classes on both sides, then restore the total from the other class.
    for (int c = 0; c < 2; ++c) {
      const std::size_t clamped = std::clamp<std::size_t>(n_test[c], 1, members[c].size() - 1);
      const int other = 1 - c;
      if (clamped > n_test[c]) {
        const std::size_t excess = clamped - n_test[c];
        n_test[other] = n_test[other] > excess ? std::max<std::size_t>(1, n_test[other] - excess) : 1;
      }
      n_test[c] = clamped;
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (n_test[c] < 1 || n_test[c] >= members[c].size()) {
      throw DataError(fmt::format("class {} cannot place {} of {} rows in the test partition", c,
                                  n_test[c], members[c].size()));
    }
  }

  Rng rng(seed);
  SplitIndices out;
  for (int c = 0; c < 2; ++c) {
    std::shuffle(members[c].begin(), members[c].end(), rng);
    out.test.insert(out.test.end(), members[c].begin(),
                    members[c].begin() + static_cast<std::ptrdiff_t>(n_test[c]));
    out.train.insert(out.train.end(), members[c].begin() + static_cast<std::ptrdiff_t>(n_test[c]),
                     members[c].end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Matrix DatasetSplit::train_fakes() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < train_labels.size(); ++i) {
    if (train_labels[i] == kFake) rows.push_back(i);
  }
  return train_features.gather_rows(rows);
}

DatasetSplit split(std::span<const SensingTask> tasks, const GenerationConfig& config) {
  config.validate();
  if (tasks.empty()) throw DataError("cannot split an empty task list");
  std::vector<int> labels;
  labels.reserve(tasks.size());
  for (const auto& t : tasks) labels.push_back(t.legitimate ? kLegitimate : kFake);

  const SplitIndices parts =
      stratified_partition(labels, config.split_ratio, derive_seed(config.rng_seed, "split"),
                           config.test_fake_count, config.test_legitimate_count);

  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<SensingTask> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(tasks[i]);
    return out;
  };
  const auto train_tasks = pick(parts.train);
  const auto test_tasks = pick(parts.test);

  DatasetSplit s;
  EncodedTasks train = encode(train_tasks);
  EncodedTasks test = encode(test_tasks, train.scaler);
  s.scaler = train.scaler;
  s.train_features = std::move(train.features);
  s.train_labels = std::move(train.labels);
  s.test_features = std::move(test.features);
  s.test_labels = std::move(test.labels);
  s.train_index = parts.train;
  s.test_index = parts.test;
  auto tag = [](int label) {
    return label == kLegitimate ? Provenance::legitimate : Provenance::original_fake;
  };
  for (int l : s.train_labels) s.train_provenance.push_back(tag(l));
  for (int l : s.test_labels) s.test_provenance.push_back(tag(l));
  return s;
}

}  // namespace mcsguard
