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

// Command-line front end: synth, augment, train, detect, eval.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganet/ganet.hpp"

namespace {

constexpr const char* kDeskNote =
    "Defaults are desk scale: 64x64 crops, mini backbone (8,16,32,64 channels), batch 4,\n"
    "2500 iterations, initial lr 2e-3 decaying 0.94 every 250 iterations. The published setting\n"
    "is 512x512 crops, VGG-16, batch 10, lr 1e-4 decaying 0.94 every 10000 iterations.";

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> overrides;
};

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + ganet::detail::fmt(v[i]);
  return out;
}

ganet::RunConfig load_config(const Options& o) {
  ganet::RunConfig cfg = o.config.empty() ? ganet::RunConfig{} : ganet::parse_config(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    ganet::require(eq != std::string::npos, "cli-harness", "--set expects key=value, got '" + kv + "'");
    ganet::set_config_value(cfg, ganet::detail::trim(kv.substr(0, eq)), ganet::detail::trim(kv.substr(eq + 1)));
  }
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

void require_out_dir(const Options& o) {
  ganet::require(!o.out_dir.empty(), "cli-harness", "--out-dir is required");
}

void require_dir(const std::string& path, const std::string& flag) {
  ganet::require(!path.empty(), "cli-harness", flag + " is required");
  ganet::require(std::filesystem::is_directory(path), "cli-harness", flag + " does not exist: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ganet: anchor-free small-object detector with background attention and corner voting"};
  app.footer(kDeskNote);
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config, "Plain-text `key = value` config file")->check(CLI::ExistingFile);
  app.add_option("--seed", opt.seed, "Master seed (overrides the config)");
  app.add_option("--out-dir", opt.out_dir, "Output directory");
  app.add_option("--set", opt.overrides, "Override a config key, key=value (repeatable)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene dataset");
  std::optional<std::size_t> count, size, min_objects, max_objects;
  synth->add_option("--count", count, "Number of scenes (default 200)");
  synth->add_option("--size", size, "Scene side length in pixels (default 64)");
  synth->add_option("--min-objects", min_objects, "Minimum objects per scene (default 1)");
  synth->add_option("--max-objects", max_objects, "Maximum objects per scene (default 6)");

  auto* augment = app.add_subcommand("augment", "Write one blended positive and negative crop per scene");
  std::string aug_data;
  std::vector<std::string> alphas, noise;
  std::optional<double> gamma_min, gamma_max;
  std::optional<std::size_t> out_size;
  augment->add_option("--data-dir", aug_data, "Input dataset directory")->required();
  augment->add_option("--alphas", alphas, "Blend weights alpha, comma separated")->delimiter(',');
  augment->add_option("--gamma-min", gamma_min, "Lower brightness offset (default -20)");
  augment->add_option("--gamma-max", gamma_max, "Upper brightness offset (default 20)");
  augment->add_option("--noise", noise, "Noise kinds: white, black, perlin")->delimiter(',');
  augment->add_option("--out-size", out_size, "Crop side length (default 64, desk scale)");

  auto* train = app.add_subcommand("train", "Train the detector; writes model.ckpt and train_log.txt");
  std::string train_data;
  train->add_option("--data-dir", train_data, "Training dataset directory")->required();

  auto* detect = app.add_subcommand("detect", "Run detection; writes per-image files and counts.txt");
  std::string checkpoint, det_data;
  detect->add_option("--checkpoint", checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  detect->add_option("--data-dir", det_data, "Dataset directory")->required();

  auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
  std::string eval_data, detections, report;
  std::vector<double> ious;
  eval->add_option("--data-dir", eval_data, "Dataset directory")->required();
  eval->add_option("--detections", detections, "Detections directory")->required();
  eval->add_option("--iou", ious, "IoU thresholds, comma separated (default 0.5,0.7)")->delimiter(',');
  eval->add_option("--report", report, "Report path (default <out-dir>/report.txt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "ERROR cli-harness: %s\n", e.what());
    return 2;
  }

  try {
    if (*synth) {
      if (count) opt.overrides.push_back("scene_count=" + std::to_string(*count));
      if (size) opt.overrides.push_back("scene_size=" + std::to_string(*size));
      if (min_objects) opt.overrides.push_back("min_objects=" + std::to_string(*min_objects));
      if (max_objects) opt.overrides.push_back("max_objects=" + std::to_string(*max_objects));
      const auto cfg = load_config(opt);
      cfg.validate();
      require_out_dir(opt);
      const auto samples = ganet::run_synth(cfg, opt.out_dir);
      std::printf("wrote %zu scenes to %s\n", samples.size(), opt.out_dir.c_str());
    } else if (*augment) {
      if (!alphas.empty()) opt.overrides.push_back("alphas=" + join(alphas));
      if (!noise.empty()) opt.overrides.push_back("noise_kinds=" + join(noise));
      if (gamma_min) opt.overrides.push_back("gamma_min=" + ganet::detail::fmt(*gamma_min));
      if (gamma_max) opt.overrides.push_back("gamma_max=" + ganet::detail::fmt(*gamma_max));
      if (out_size) opt.overrides.push_back("input_size=" + std::to_string(*out_size));
      const auto cfg = load_config(opt);
      cfg.validate();
      require_out_dir(opt);
      require_dir(aug_data, "--data-dir");
      const auto n = ganet::run_augment(cfg, aug_data, opt.out_dir);
      std::printf("wrote %zu crops to %s\n", n, opt.out_dir.c_str());
    } else if (*train) {
      const auto cfg = load_config(opt);
      cfg.validate();
      require_out_dir(opt);
      require_dir(train_data, "--data-dir");
      const auto r = ganet::run_train(cfg, train_data, opt.out_dir);
      if (r.log.empty()) {
        std::printf("wrote initial checkpoint %s\n", r.checkpoint.string().c_str());
      } else {
        std::printf("trained %zu iterations, final loss %.6f\n", r.log.size(), r.log.back().loss);
      }
    } else if (*detect) {
      const auto cfg = load_config(opt);
      cfg.validate();
      require_out_dir(opt);
      require_dir(det_data, "--data-dir");
      ganet::run_detect(cfg, checkpoint, det_data, opt.out_dir);
      std::printf("wrote detections to %s\n", opt.out_dir.c_str());
    } else if (*eval) {
      if (!ious.empty()) opt.overrides.push_back("eval_ious=" + join(ious));
      const auto cfg = load_config(opt);
      cfg.validate();
      require_dir(eval_data, "--data-dir");
      require_dir(detections, "--detections");
      if (report.empty()) {
        require_out_dir(opt);
        report = (std::filesystem::path(opt.out_dir) / "report.txt").string();
      }
      const auto r = ganet::run_eval(cfg, eval_data, detections, report);
      std::fputs(ganet::format_report(r).c_str(), stdout);
    }
  } catch (const ganet::Error& e) {
    std::fprintf(stderr, "ERROR %s: %s\n", e.module().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ERROR cli-harness: %s\n", e.what());
    return 1;
  }
  return 0;
}
