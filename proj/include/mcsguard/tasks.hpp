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

// Synthetic mobile-crowdsensing task population.
//
// Legitimate and fake tasks are drawn from per-class feature distributions
// (defaults below; see ClassProfile):
//
//   feature          fake tasks                       legitimate tasks
//   day              uniform 1..6                     uniform 1..6
//   hour             80% in 7..11, 20% in 12..17      8% in 0..5, 92% in 6..23
//   duration (min)   70% in {40,50,60}, 30% in        uniform over {10,...,60}
//                    {10,20,30}
//   battery (%)      80% in 7..10, 20% in 1..6        uniform 1..10
//   coverage (m)     uniform 30..100                  uniform 30..100
//   movement (m)     uniform 10..80                   uniform 10..80
//
// Latitude and longitude are uniform inside a configurable bounding box and
// determine the grid cell. Minute is uniform 0..59. A freshly submitted task
// has its whole duration remaining unless configured otherwise.

#ifndef MCSGUARD_TASKS_HPP_
#define MCSGUARD_TASKS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcsguard/matrix.hpp"

namespace mcsguard {

// Where a row came from. Real test rows are legitimate or original_fake;
// generator output is adversarial_fake.
enum class Provenance { legitimate, original_fake, adversarial_fake };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

// Legitimacy label convention used everywhere: 1 = legitimate, 0 = fake.
inline constexpr int kLegitimate = 1;
inline constexpr int kFake = 0;

struct SensingTask {
  std::int64_t id = 0;
  double latitude = 0.0;
  double longitude = 0.0;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int duration = 10;        // minutes
  int remaining_time = 10;  // minutes
  int battery_pct = 1;
  int coverage = 30;        // recruitment radius, metres
  int grid_number = 0;
  bool on_peak_hour = false;
  bool legitimate = true;
  // Generated for completeness; not part of the model feature vector.
  double movement_radius = 10.0;

  friend bool operator==(const SensingTask&, const SensingTask&) = default;
};

struct BoundingBox {
  double lat_min = 45.40;
  double lat_max = 45.62;
  double lon_min = -75.50;
  double lon_max = -75.10;
};

// Inclusive integer range.
struct IntRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

// Draws from `first` with probability p_first, otherwise from `second`.
struct TwoBandDistribution {
  double p_first = 1.0;
  IntRange first;
  IntRange second;
  friend bool operator==(const TwoBandDistribution&, const TwoBandDistribution&) = default;
};

// Per-class feature distributions. Durations are drawn on a grid of
// duration_step minutes inside the band.
struct ClassProfile {
  IntRange day{1, 6};
  IntRange minute{0, 59};
  IntRange coverage{30, 100};
  TwoBandDistribution hour;
  TwoBandDistribution duration;
  TwoBandDistribution battery;
  friend bool operator==(const ClassProfile&, const ClassProfile&) = default;
};

ClassProfile default_fake_profile();
ClassProfile default_legitimate_profile();

enum class RemainingTimeRule {
  full_duration,  // remaining_time = duration
  uniform,        // remaining_time uniform in 1..duration
};

struct GenerationConfig {
  std::size_t total_tasks = 14484;
  double fake_fraction = 1897.0 / 14484.0;
  BoundingBox bounding_box;
  int grid_resolution = 10;  // cells per axis
  int on_peak_start = 7;     // inclusive hours
  int on_peak_end = 17;
  int duration_step = 10;  // minutes
  ClassProfile fake = default_fake_profile();
  ClassProfile legitimate = default_legitimate_profile();
  double movement_radius_min = 10.0;
  double movement_radius_max = 80.0;
  RemainingTimeRule remaining_time = RemainingTimeRule::full_duration;
  double split_ratio = 0.8;  // train fraction
  // Pins the per-class test partition sizes instead of deriving them from
  // split_ratio. Both or neither must be set.
  std::optional<std::size_t> test_fake_count;
  std::optional<std::size_t> test_legitimate_count;
  std::uint64_t rng_seed = 20220601;

  // Throws ConfigError.
  void validate() const;
  std::size_t fake_count() const;
};

// Exactly config.total_tasks tasks, ids 0..n-1, reproducible from rng_seed.
std::vector<SensingTask> generate_tasks(const GenerationConfig& config);

// Cell index of (lat, lon) on a resolution x resolution grid; row-major with
// latitude selecting the row. Points on the upper edges map to the last cell.
int grid_cell(double latitude, double longitude, const BoundingBox& box, int resolution);

// ---------------------------------------------------------------------------
// Numeric encoding

inline constexpr std::size_t kFeatureCount = 11;
// Model feature order (ID and legitimacy are dropped).
extern const std::array<std::string_view, kFeatureCount> kFeatureNames;

struct FeatureRange {
  std::string feature;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

// Per-feature min/max fitted on training rows; maps each feature to [-1, 1].
// A feature that is constant in the fitted rows encodes to 0.
class FeatureScaler {
 public:
  FeatureScaler() = default;
  explicit FeatureScaler(std::vector<FeatureRange> ranges);

  static FeatureScaler fit(std::span<const SensingTask> tasks);

  const std::vector<FeatureRange>& ranges() const noexcept { return ranges_; }
  double encode(std::size_t feature, double raw) const;
  double decode(std::size_t feature, double encoded) const;

  friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;

 private:
  std::vector<FeatureRange> ranges_;
};

std::array<double, kFeatureCount> raw_features(const SensingTask& task);

struct EncodedTasks {
  Matrix features;          // tasks x kFeatureCount
  std::vector<int> labels;  // kLegitimate / kFake
  FeatureScaler scaler;
};

// Fits a scaler on `tasks` when none is given; a supplied scaler is applied
// unchanged. Throws DataError on an empty task list.
EncodedTasks encode(std::span<const SensingTask> tasks,
                    const std::optional<FeatureScaler>& scaler = std::nullopt);

// Inverse of the scaling for one encoded row; integer features are rounded
// and the on-peak flag is thresholded at 0.
std::array<double, kFeatureCount> decode_row(std::span<const double> encoded,
                                             const FeatureScaler& scaler);

// ---------------------------------------------------------------------------
// Train/test partition

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Stratified partition of row indices by label. The test size is
// round(n * (1 - train_ratio)), shared between classes by largest remainder
// and then clamped so every class keeps at least one row on each side.
// Pinned per-class test counts override the ratio. Throws DataError when a
// class cannot appear in both partitions.
SplitIndices stratified_partition(std::span<const int> labels, double train_ratio,
                                  std::uint64_t seed,
                                  std::optional<std::size_t> test_fake = std::nullopt,
                                  std::optional<std::size_t> test_legitimate = std::nullopt);

struct DatasetSplit {
  Matrix train_features;
  std::vector<int> train_labels;
  std::vector<Provenance> train_provenance;
  std::vector<std::size_t> train_index;  // positions in the task list
  Matrix test_features;
  std::vector<int> test_labels;
  std::vector<Provenance> test_provenance;
  std::vector<std::size_t> test_index;
  FeatureScaler scaler;  // fitted on train rows only

  // Encoded training rows whose label is fake.
  Matrix train_fakes() const;
};

DatasetSplit split(std::span<const SensingTask> tasks, const GenerationConfig& config);

// ---------------------------------------------------------------------------
// Files

// Header: ID,latitude,longitude,day,hour,minute,duration,remaining_time,
// battery_requirement_pct,coverage,legitimacy,grid_number,on_peak_hour,provenance
// movement_radius is not stored and reads back as its default.
void write_tasks_csv(const std::string& path, std::span<const SensingTask> tasks);
std::vector<SensingTask> read_tasks_csv(const std::string& path);

// [{"feature": ..., "min": ..., "max": ...}, ...]
void write_scaler_json(const std::string& path, const FeatureScaler& scaler);
FeatureScaler read_scaler_json(const std::string& path);

}  // namespace mcsguard

#endif  // MCSGUARD_TASKS_HPP_
