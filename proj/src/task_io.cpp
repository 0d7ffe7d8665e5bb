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

#include <charconv>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "mcsguard/error.hpp"
#include "mcsguard/io_util.hpp"
#include "mcsguard/tasks.hpp"

namespace mcsguard {
namespace {

constexpr std::string_view kTaskHeader =
    "ID,latitude,longitude,day,hour,minute,duration,remaining_time,battery_requirement_pct,"
    "coverage,legitimacy,grid_number,on_peak_hour,provenance";

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw IoError(fmt::format("line {}: cannot parse '{}'", line, field));
  }
  return value;
}

}  // namespace

void write_tasks_csv(const std::string& path, std::span<const SensingTask> tasks) {
  std::string out;
  out.reserve(tasks.size() * 80 + kTaskHeader.size());
  out.append(kTaskHeader);
  out.push_back('\n');
  for (const auto& t : tasks) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t.id,
                   t.latitude, t.longitude, t.day, t.hour, t.minute, t.duration, t.remaining_time,
                   t.battery_pct, t.coverage, t.legitimate ? 1 : 0, t.grid_number,
                   t.on_peak_hour ? 1 : 0,
                   to_string(t.legitimate ? Provenance::legitimate : Provenance::original_fake));
  }
  write_text_file(path, out);
}

std::vector<SensingTask> read_tasks_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kTaskHeader) {
    throw IoError(fmt::format("{}: missing or unexpected task CSV header", path));
  }
  std::vector<SensingTask> tasks;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 14) {
      throw IoError(fmt::format("{}:{}: expected 14 fields, got {}", path, line_no, fields.size()));
    }
    SensingTask t;
    t.id = parse_number<std::int64_t>(fields[0], line_no);
    t.latitude = parse_number<double>(fields[1], line_no);
    t.longitude = parse_number<double>(fields[2], line_no);
    t.day = parse_number<int>(fields[3], line_no);
    t.hour = parse_number<int>(fields[4], line_no);
    t.minute = parse_number<int>(fields[5], line_no);
    t.duration = parse_number<int>(fields[6], line_no);
    t.remaining_time = parse_number<int>(fields[7], line_no);
    t.battery_pct = parse_number<int>(fields[8], line_no);
    t.coverage = parse_number<int>(fields[9], line_no);
    t.legitimate = parse_number<int>(fields[10], line_no) != 0;
    t.grid_number = parse_number<int>(fields[11], line_no);
    t.on_peak_hour = parse_number<int>(fields[12], line_no) != 0;
    tasks.push_back(t);
  }
  return tasks;
}

void write_scaler_json(const std::string& path, const FeatureScaler& scaler) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : scaler.ranges()) {
    j.push_back({{"feature", r.feature}, {"min", r.min}, {"max", r.max}});
  }
  write_text_file(path, j.dump(2) + "\n");
}

FeatureScaler read_scaler_json(const std::string& path) {
  try {
    const auto j = nlohmann::json::parse(read_text_file(path));
    std::vector<FeatureRange> ranges;
    for (const auto& e : j) {
      ranges.push_back({e.at("feature").get<std::string>(), e.at("min").get<double>(),
                        e.at("max").get<double>()});
    }
    return FeatureScaler(std::move(ranges));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace mcsguard
