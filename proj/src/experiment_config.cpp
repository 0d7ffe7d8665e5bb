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

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include <fmt/format.h>

#include "json.hpp"
#include "mcsguard/error.hpp"
#include "mcsguard/experiment.hpp"
#include "mcsguard/io_util.hpp"

namespace mcsguard {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::full: return "full";
    case Mode::datagen_only: return "datagen-only";
    case Mode::train_only: return "train-only";
    case Mode::eval_only: return "eval-only";
    case Mode::sweep: return "sweep";
  }
  return "?";
}

Mode mode_from_string(std::string_view s) {
  for (Mode m : {Mode::full, Mode::datagen_only, Mode::train_only, Mode::eval_only, Mode::sweep}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError(fmt::format("unknown mode '{}'", s));
}

Preset preset_from_string(std::string_view s) {
  if (s == "paper") return Preset::paper;
  if (s == "desk") return Preset::desk;
  throw ConfigError(fmt::format("unknown preset '{}'", s));
}

std::string_view to_string(GanCorpus c) {
  return c == GanCorpus::train_all ? "train_all" : "train_fakes";
}

GanCorpus gan_corpus_from_string(std::string_view s) {
  if (s == "train_all") return GanCorpus::train_all;
  if (s == "train_fakes") return GanCorpus::train_fakes;
  throw ConfigError(fmt::format("unknown gan_corpus '{}'", s));
}

void ExperimentConfig::validate() const {
  generation.validate();
  if (rounds == 0) throw ConfigError("rounds must be at least 1");
  if (!(disc_threshold >= 0.0 && disc_threshold <= 1.0)) {
    throw ConfigError("disc_threshold must lie in [0, 1]");
  }
  if (classifiers.empty()) throw ConfigError("at least one classifier is required");
  for (const auto& c : classifiers) mcsguard::validate(c);
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (classifier_name(classifiers[i]) == classifier_name(classifiers[j])) {
        throw ConfigError(fmt::format("classifier '{}' listed twice", classifier_name(classifiers[i])));
      }
    }
  }
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (sweep.batch_sizes.empty() || sweep.epochs.empty()) {
    throw ConfigError("sweep grid must not be empty");
  }
  if (!(sweep.epoch_scale > 0.0) || !std::isfinite(sweep.epoch_scale)) {
    throw ConfigError("sweep epoch_scale must be positive");
  }
  if (sweep.probe_rows == 0) throw ConfigError("sweep probe_rows must be positive");
}

ExperimentConfig preset_config(Preset preset) {
  ExperimentConfig c;
  if (preset == Preset::paper) {
    c.generation.total_tasks = 14484;
    c.generation.fake_fraction = 1897.0 / 14484.0;
    c.generation.test_fake_count = 391;
    c.generation.test_legitimate_count = 2506;
    c.gan.batch_size = 32;
    c.gan.epochs = 2000;
    c.rounds = 20;
    c.synthetic_count = 2000;
  } else {
    c.generation.total_tasks = 2000;
    c.gan.epochs = 500;
    c.rounds = 5;
    c.synthetic_count = 300;
  }
  return c;
}

namespace {

// Copies known keys out of an object and complains about the rest.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", where_));
  }
  ~Fields() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ConfigError(fmt::format("unknown key '{}' in {}", key, where_));
      }
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(fmt::format("{}.{} has the wrong type", where_, key));
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  const json* sub(const char* key) {
    seen_.push_back(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  const std::string& where() const { return where_; }

 private:
  const json& j_;
  std::string where_;
  std::vector<std::string> seen_;
};

void read_range(const json& j, const std::string& where, IntRange& r) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(fmt::format("{} must be [lo, hi]", where));
  }
  r = {j[0].get<int>(), j[1].get<int>()};
}

void read_bands(const json& j, const std::string& where, TwoBandDistribution& d) {
  Fields f(j, where);
  f.get("p_first", d.p_first);
  if (const json* s = f.sub("first")) read_range(*s, where + ".first", d.first);
  if (const json* s = f.sub("second")) read_range(*s, where + ".second", d.second);
}

void read_profile(const json& j, const std::string& where, ClassProfile& p) {
  Fields f(j, where);
  if (const json* s = f.sub("day")) read_range(*s, where + ".day", p.day);
  if (const json* s = f.sub("minute")) read_range(*s, where + ".minute", p.minute);
  if (const json* s = f.sub("coverage")) read_range(*s, where + ".coverage", p.coverage);
  if (const json* s = f.sub("hour")) read_bands(*s, where + ".hour", p.hour);
  if (const json* s = f.sub("duration")) read_bands(*s, where + ".duration", p.duration);
  if (const json* s = f.sub("battery")) read_bands(*s, where + ".battery", p.battery);
}

void read_generation(const json& j, GenerationConfig& g) {
  Fields f(j, "generation");
  f.get("total_tasks", g.total_tasks);
  f.get("fake_fraction", g.fake_fraction);
  if (const json* b = f.sub("bounding_box")) {
    Fields fb(*b, "generation.bounding_box");
    fb.get("lat_min", g.bounding_box.lat_min);
    fb.get("lat_max", g.bounding_box.lat_max);
    fb.get("lon_min", g.bounding_box.lon_min);
    fb.get("lon_max", g.bounding_box.lon_max);
  }
  f.get("grid_resolution", g.grid_resolution);
  f.get("on_peak_start", g.on_peak_start);
  f.get("on_peak_end", g.on_peak_end);
  f.get("duration_step", g.duration_step);
  f.get("movement_radius_min", g.movement_radius_min);
  f.get("movement_radius_max", g.movement_radius_max);
  std::string rule = g.remaining_time == RemainingTimeRule::full_duration ? "full_duration"
                                                                           : "uniform";
  f.get("remaining_time", rule);
  if (rule == "full_duration") {
    g.remaining_time = RemainingTimeRule::full_duration;
  } else if (rule == "uniform") {
    g.remaining_time = RemainingTimeRule::uniform;
  } else {
    throw ConfigError(fmt::format("unknown remaining_time rule '{}'", rule));
  }
  f.get("split_ratio", g.split_ratio);
  f.get("test_fake_count", g.test_fake_count);
  f.get("test_legitimate_count", g.test_legitimate_count);
  if (const json* p = f.sub("fake")) read_profile(*p, "generation.fake", g.fake);
  if (const json* p = f.sub("legitimate")) read_profile(*p, "generation.legitimate", g.legitimate);
}

void read_gan(const json& j, GanConfig& g) {
  Fields f(j, "gan");
  f.get("noise_dim", g.noise_dim);
  f.get("gen_hidden", g.gen_hidden);
  f.get("disc_hidden", g.disc_hidden);
  std::string ga(to_string(g.gen_hidden_activation));
  std::string da(to_string(g.disc_hidden_activation));
  f.get("gen_hidden_activation", ga);
  f.get("disc_hidden_activation", da);
  try {
    g.gen_hidden_activation = activation_from_string(ga);
    g.disc_hidden_activation = activation_from_string(da);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  f.get("learning_rate", g.learning_rate);
  f.get("batch_size", g.batch_size);
  f.get("epochs", g.epochs);
  f.get("loss_log_interval", g.loss_log_interval);
  std::string upd = g.disc_update == DiscriminatorUpdate::separate ? "separate" : "joint";
  f.get("disc_update", upd);
  if (upd == "separate") {
    g.disc_update = DiscriminatorUpdate::separate;
  } else if (upd == "joint") {
    g.disc_update = DiscriminatorUpdate::joint;
  } else {
    throw ConfigError(fmt::format("unknown disc_update '{}'", upd));
  }
}

ClassifierKind read_classifier(const json& j, std::size_t i) {
  const std::string where = fmt::format("classifiers[{}]", i);
  Fields f(j, where);
  std::string kind;
  f.get("kind", kind);
  if (kind == "knn") {
    KnnParams p;
    f.get("k", p.k);
    return p;
  }
  if (kind == "nb") {
    GaussianNbParams p;
    f.get("var_smoothing", p.var_smoothing);
    return p;
  }
  if (kind == "dt") {
    DecisionTreeParams p;
    f.get("max_depth", p.max_depth);
    f.get("min_samples_split", p.min_samples_split);
    return p;
  }
  throw ConfigError(fmt::format("{}: unknown kind '{}'", where, kind));
}

ordered_json range_json(const IntRange& r) { return {r.lo, r.hi}; }

ordered_json bands_json(const TwoBandDistribution& d) {
  return {{"p_first", d.p_first}, {"first", range_json(d.first)}, {"second", range_json(d.second)}};
}

ordered_json profile_json(const ClassProfile& p) {
  return {{"day", range_json(p.day)},
          {"minute", range_json(p.minute)},
          {"coverage", range_json(p.coverage)},
          {"hour", bands_json(p.hour)},
          {"duration", bands_json(p.duration)},
          {"battery", bands_json(p.battery)}};
}

template <typename T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

ExperimentConfig apply_config_json(ExperimentConfig c, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  Fields f(j, "config");
  f.get("seed", c.seed);
  f.get("rounds", c.rounds);
  f.get("synthetic_count", c.synthetic_count);
  f.get("disc_threshold", c.disc_threshold);
  f.get("output_dir", c.output_dir);
  std::string mode(to_string(c.mode));
  f.get("mode", mode);
  c.mode = mode_from_string(mode);
  std::string corpus(to_string(c.gan_corpus));
  f.get("gan_corpus", corpus);
  c.gan_corpus = gan_corpus_from_string(corpus);
  if (const json* g = f.sub("generation")) read_generation(*g, c.generation);
  if (const json* g = f.sub("gan")) read_gan(*g, c.gan);
  if (const json* list = f.sub("classifiers")) {
    if (!list->is_array()) throw ConfigError("classifiers must be an array");
    c.classifiers.clear();
    for (std::size_t i = 0; i < list->size(); ++i) {
      c.classifiers.push_back(read_classifier((*list)[i], i));
    }
  }
  if (const json* s = f.sub("sweep")) {
    Fields fs(*s, "sweep");
    fs.get("batch_sizes", c.sweep.batch_sizes);
    fs.get("epochs", c.sweep.epochs);
    fs.get("epoch_scale", c.sweep.epoch_scale);
    fs.get("probe_rows", c.sweep.probe_rows);
    fs.get("reference_batch_size", c.sweep.reference_batch_size);
    fs.get("reference_epochs", c.sweep.reference_epochs);
  }
  return c;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  try {
    return apply_config_json(std::move(base), read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  const auto& g = c.generation;
  ordered_json gen = {
      {"total_tasks", g.total_tasks},
      {"fake_fraction", g.fake_fraction},
      {"bounding_box",
       {{"lat_min", g.bounding_box.lat_min},
        {"lat_max", g.bounding_box.lat_max},
        {"lon_min", g.bounding_box.lon_min},
        {"lon_max", g.bounding_box.lon_max}}},
      {"grid_resolution", g.grid_resolution},
      {"on_peak_start", g.on_peak_start},
      {"on_peak_end", g.on_peak_end},
      {"duration_step", g.duration_step},
      {"movement_radius_min", g.movement_radius_min},
      {"movement_radius_max", g.movement_radius_max},
      {"remaining_time",
       g.remaining_time == RemainingTimeRule::full_duration ? "full_duration" : "uniform"},
      {"split_ratio", g.split_ratio},
      {"test_fake_count", opt_json(g.test_fake_count)},
      {"test_legitimate_count", opt_json(g.test_legitimate_count)},
      {"fake", profile_json(g.fake)},
      {"legitimate", profile_json(g.legitimate)},
  };
  const auto& n = c.gan;
  ordered_json gan = {
      {"noise_dim", n.noise_dim},
      {"gen_hidden", n.gen_hidden},
      {"disc_hidden", n.disc_hidden},
      {"gen_hidden_activation", std::string(to_string(n.gen_hidden_activation))},
      {"disc_hidden_activation", std::string(to_string(n.disc_hidden_activation))},
      {"learning_rate", n.learning_rate},
      {"batch_size", n.batch_size},
      {"epochs", n.epochs},
      {"loss_log_interval", n.loss_log_interval},
      {"disc_update", n.disc_update == DiscriminatorUpdate::separate ? "separate" : "joint"},
  };
  ordered_json clfs = ordered_json::array();
  for (const auto& k : c.classifiers) {
    if (const auto* p = std::get_if<KnnParams>(&k)) {
      clfs.push_back({{"kind", "knn"}, {"k", p->k}});
    } else if (const auto* p = std::get_if<GaussianNbParams>(&k)) {
      clfs.push_back({{"kind", "nb"}, {"var_smoothing", p->var_smoothing}});
    } else if (const auto* p = std::get_if<DecisionTreeParams>(&k)) {
      clfs.push_back({{"kind", "dt"},
                      {"max_depth", opt_json(p->max_depth)},
                      {"min_samples_split", p->min_samples_split}});
    }
  }
  ordered_json j = {
      {"seed", c.seed},
      {"rounds", c.rounds},
      {"synthetic_count", c.synthetic_count},
      {"disc_threshold", c.disc_threshold},
      {"output_dir", c.output_dir},
      {"mode", std::string(to_string(c.mode))},
      {"gan_corpus", std::string(to_string(c.gan_corpus))},
      {"generation", gen},
      {"gan", gan},
      {"classifiers", clfs},
      {"sweep",
       {{"batch_sizes", c.sweep.batch_sizes},
        {"epochs", c.sweep.epochs},
        {"epoch_scale", c.sweep.epoch_scale},
        {"probe_rows", c.sweep.probe_rows},
        {"reference_batch_size", c.sweep.reference_batch_size},
        {"reference_epochs", c.sweep.reference_epochs}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace mcsguard
