/* Copyright 2026 The ganet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef GANET_CONFIG_HPP_
#define GANET_CONFIG_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ganet/augment.hpp"
#include "ganet/error.hpp"
#include "ganet/losses.hpp"
#include "ganet/net.hpp"
#include "ganet/postprocess.hpp"
#include "ganet/synth.hpp"

namespace ganet {

// Learning-rate schedule and batch settings. Paper-scale values are
// lr 1e-4 decaying by 0.94 every 10000 iterations with batch 10; the defaults
// below are desk-scale overrides for 64x64 toy training.
struct ScheduleConfig {
  double initial_lr = 2e-3;
  double decay_rate = 0.94;
  std::uint64_t decay_every = 250;
  std::size_t batch_size = 4;
  std::uint64_t max_iters = 2500;
  std::uint64_t checkpoint_every = 500;
};

struct RunConfig {
  NetConfig model;
  LossWeights loss;
  PostprocessConfig post;
  AugmentConfig augment;
  ScheduleConfig schedule;
  SceneConfig scene;
  std::size_t scene_count = 200;
  std::vector<double> eval_ious{0.5, 0.7};
  std::uint64_t seed = 0;

  void validate() const {
    post.validate();
    augment.validate();
    scene.validate();
    require(model.input_h % 16 == 0 && model.input_w % 16 == 0 && model.input_h > 0, "cli-harness",
            "input_size must be a positive multiple of 16");
    require(augment.out_size == model.input_h, "cli-harness", "crop size must equal input_size");
    require(loss.score >= 0 && loss.foreground >= 0 && loss.background >= 0, "cli-harness",
            "loss weights must be non-negative");
    require(schedule.initial_lr > 0.0, "cli-harness", "initial_lr must be positive");
    require(schedule.decay_rate > 0.0 && schedule.decay_rate <= 1.0, "cli-harness", "decay_rate must lie in (0,1]");
    require(schedule.decay_every > 0, "cli-harness", "decay_every must be positive");
    require(schedule.batch_size > 0, "cli-harness", "batch_size must be positive");
    require(schedule.checkpoint_every > 0, "cli-harness", "checkpoint_every must be positive");
    require(!eval_ious.empty(), "cli-harness", "eval_ious must not be empty");
    for (double t : eval_ious) require(t > 0.0 && t <= 1.0, "cli-harness", "eval_ious must lie in (0,1]");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) fail("cli-harness", "key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    fail("cli-harness", "key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail("cli-harness", "key '" + key + "': expected true or false, got '" + v + "'");
}

inline std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

struct Field {
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    auto num = [&f](const char* key, auto member) {
      f.push_back({key, [key, member](RunConfig& c, const std::string& v) { member(c) = to_double(key, v); },
                   [member](RunConfig c) { return fmt(member(c)); }});
    };
    auto uint = [&f](const char* key, auto member) {
      f.push_back({key,
                   [key, member](RunConfig& c, const std::string& v) {
                     member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(to_uint(key, v));
                   },
                   [member](RunConfig c) { return std::to_string(member(c)); }});
    };
    auto list = [&f](const char* key, auto member) {
      f.push_back({key,
                   [key, member](RunConfig& c, const std::string& v) {
                     std::vector<double> out;
                     for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
                     member(c) = out;
                   },
                   [member](RunConfig c) { return fmt_list(member(c)); }});
    };
    f.push_back({"fusion", [](RunConfig& c, const std::string& v) { c.model.fusion = parse_fusion(v); },
                 [](const RunConfig& c) { return to_string(c.model.fusion); }});
    f.push_back({"channels",
                 [](RunConfig& c, const std::string& v) {
                   const auto items = split_list(v);
                   require(items.size() == 4, "cli-harness", "key 'channels': expected 4 comma-separated widths");
                   for (std::size_t i = 0; i < 4; ++i) {
                     c.model.channels[i] = to_uint("channels", items[i]);
                     require(c.model.channels[i] > 0, "cli-harness", "key 'channels': widths must be positive");
                   }
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < 4; ++i) s += (i ? "," : "") + std::to_string(c.model.channels[i]);
                   return s;
                 }});
    uint("stem_channels", [](RunConfig& c) -> std::size_t& { return c.model.stem_channels; });
    f.push_back({"input_size",
                 [](RunConfig& c, const std::string& v) {
                   const auto n = to_uint("input_size", v);
                   c.model.input_h = c.model.input_w = n;
                   c.augment.out_size = n;
                 },
                 [](const RunConfig& c) { return std::to_string(c.model.input_h); }});
    uint("seed", [](RunConfig& c) -> std::uint64_t& { return c.seed; });
    num("lambda_sco", [](RunConfig& c) -> double& { return c.loss.score; });
    num("lambda_fa", [](RunConfig& c) -> double& { return c.loss.foreground; });
    num("lambda_ba", [](RunConfig& c) -> double& { return c.loss.background; });
    num("mu", [](RunConfig& c) -> double& { return c.post.mu; });
    num("nms_iou", [](RunConfig& c) -> double& { return c.post.nms_iou; });
    num("epsilon", [](RunConfig& c) -> double& { return c.post.epsilon; });
    f.push_back({"kappa",
                 [](RunConfig& c, const std::string& v) {
                   const auto k = to_uint("kappa", v);
                   require(k <= 4, "cli-harness", "key 'kappa': must lie in 0..4, got " + v);
                   c.post.kappa = static_cast<int>(k);
                 },
                 [](const RunConfig& c) { return std::to_string(c.post.kappa); }});
    uint("top_k", [](RunConfig& c) -> std::size_t& { return c.post.top_k; });
    num("count_threshold", [](RunConfig& c) -> double& { return c.post.count_threshold; });
    list("alphas", [](RunConfig& c) -> std::vector<double>& { return c.augment.alphas; });
    num("gamma_min", [](RunConfig& c) -> double& { return c.augment.gamma_min; });
    num("gamma_max", [](RunConfig& c) -> double& { return c.augment.gamma_max; });
    f.push_back({"noise_kinds",
                 [](RunConfig& c, const std::string& v) {
                   c.augment.kinds.clear();
                   for (const auto& item : split_list(v)) c.augment.kinds.push_back(parse_noise_kind(item));
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (std::size_t i = 0; i < c.augment.kinds.size(); ++i) s += (i ? "," : "") + to_string(c.augment.kinds[i]);
                   return s;
                 }});
    num("augment_prob", [](RunConfig& c) -> double& { return c.augment.probability; });
    list("scales", [](RunConfig& c) -> std::vector<double>& { return c.augment.scales; });
    f.push_back({"continuous_scale",
                 [](RunConfig& c, const std::string& v) { c.augment.continuous_scale = to_bool("continuous_scale", v); },
                 [](const RunConfig& c) { return std::string(c.augment.continuous_scale ? "true" : "false"); }});
    num("initial_lr", [](RunConfig& c) -> double& { return c.schedule.initial_lr; });
    num("decay_rate", [](RunConfig& c) -> double& { return c.schedule.decay_rate; });
    uint("decay_every", [](RunConfig& c) -> std::uint64_t& { return c.schedule.decay_every; });
    uint("batch_size", [](RunConfig& c) -> std::size_t& { return c.schedule.batch_size; });
    uint("max_iters", [](RunConfig& c) -> std::uint64_t& { return c.schedule.max_iters; });
    uint("checkpoint_every", [](RunConfig& c) -> std::uint64_t& { return c.schedule.checkpoint_every; });
    uint("scene_count", [](RunConfig& c) -> std::size_t& { return c.scene_count; });
    uint("scene_size", [](RunConfig& c) -> std::size_t& { return c.scene.size; });
    uint("min_objects", [](RunConfig& c) -> std::size_t& { return c.scene.min_objects; });
    uint("max_objects", [](RunConfig& c) -> std::size_t& { return c.scene.max_objects; });
    uint("min_object_size", [](RunConfig& c) -> std::size_t& { return c.scene.min_object_size; });
    uint("max_object_size", [](RunConfig& c) -> std::size_t& { return c.scene.max_object_size; });
    list("eval_ious", [](RunConfig& c) -> std::vector<double>& { return c.eval_ious; });
    return f;
  }();
  return table;
}

}  // namespace detail

// Applies one `key = value` assignment; unknown keys are rejected.
inline void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : detail::fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  fail("cli-harness", "unknown config key '" + key + "'");
}

inline RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>") {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) fail("cli-harness", where + "expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      set_config_value(cfg, key, value);
    } catch (const Error& e) {
      throw Error("cli-harness", where + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error("cli-harness", origin + ": " + e.what());
  }
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "cli-harness", "cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str(), path);
}

// Every key with its effective value, in table order. parse_config_text()
// of this text reproduces the configuration.
inline std::string format_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& f : detail::fields()) out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace ganet

#endif  // GANET_CONFIG_HPP_
