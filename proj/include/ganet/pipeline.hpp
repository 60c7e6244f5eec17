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
#ifndef GANET_PIPELINE_HPP_
#define GANET_PIPELINE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "ganet/augment.hpp"
#include "ganet/checkpoint.hpp"
#include "ganet/config.hpp"
#include "ganet/dataset_io.hpp"
#include "ganet/metrics.hpp"
#include "ganet/synth.hpp"
#include "ganet/train.hpp"

namespace ganet {

// synth: writes cfg.scene_count generated scenes to `out_dir`.
inline std::vector<SceneSample> run_synth(const RunConfig& cfg, const fs::path& out_dir) {
  auto samples = gen_corpus(cfg.seed, cfg.scene_count, cfg.scene);
  write_dataset(out_dir, samples);
  return samples;
}

// augment: one blended positive and negative crop per scene with objects,
// written as a dataset (`<name>_pos`, `<name>_neg`) plus labels.txt listing
// `crop-name label scale`.
inline std::size_t run_augment(const RunConfig& cfg, const fs::path& data_dir, const fs::path& out_dir) {
  const auto data = read_dataset(data_dir);
  Rng rng(cfg.seed);
  std::vector<SceneSample> crops;
  std::string labels;
  for (const auto& s : data) {
    Rng srng(rng.fork());
    if (s.boxes.empty()) continue;
    const CropResult r = gen_crop_pair(s.image, s.boxes, srng, cfg.augment);
    for (const CropPair* c : {&r.positive, &r.negative}) {
      SceneSample out;
      out.name = s.name + (c->label == 1 ? "_pos" : "_neg");
      out.image = augment_image(c->image, srng, cfg.augment);
      out.seed = s.seed;
      for (const Box& b : c->boxes) {
        const Box rounded{std::round(b.x1), std::round(b.y1), std::round(b.x2), std::round(b.y2)};
        if (rounded.x1 < rounded.x2 && rounded.y1 < rounded.y2) out.boxes.push_back(rounded);
      }
      labels += out.name + " " + std::to_string(c->label) + " " + detail::fmt(c->scale) + "\n";
      crops.push_back(std::move(out));
    }
  }
  write_dataset(out_dir, crops);
  write_file(out_dir / "labels.txt", labels, "augmentation");
  return crops.size();
}

inline TrainResult run_train(const RunConfig& cfg, const fs::path& data_dir, const fs::path& out_dir) {
  const auto data = read_dataset(data_dir);
  return train_loop(cfg, data, out_dir);
}

inline Detector<float> load_model(const RunConfig& cfg, const fs::path& checkpoint) {
  Detector<float> model(Trainer::model_config(cfg));
  load_checkpoint(checkpoint.string(), model.params());
  return model;
}

// detect: per image, network -> threshold -> NMS -> corner vote -> rank.
// Writes <name>.txt detection files and counts.txt (`name gt_count pred_count`).
inline void run_detect(const RunConfig& cfg, const fs::path& checkpoint, const fs::path& data_dir, const fs::path& out_dir) {
  Detector<float> model = load_model(cfg, checkpoint);
  const auto data = read_dataset(data_dir);
  fs::create_directories(out_dir);
  std::string counts;
  for (const auto& s : data) {
    const RankedDetections r = detect_image(model, s.image, cfg.post);
    write_detections((out_dir / (s.name + ".txt")).string(), r.detections);
    counts += s.name + " " + std::to_string(s.boxes.size()) + " " + std::to_string(r.count) + "\n";
  }
  write_file(out_dir / "counts.txt", counts, "cli-harness");
}

inline EvalResult run_eval(const RunConfig& cfg, const fs::path& data_dir, const fs::path& det_dir, const fs::path& report) {
  const auto data = read_dataset(data_dir);
  require(fs::is_directory(det_dir), "eval-metrics", "detections directory does not exist: " + det_dir.string());
  std::vector<ImageEval> images;
  for (const auto& s : data) {
    ImageEval e;
    e.ground_truth = s.boxes;
    const fs::path p = det_dir / (s.name + ".txt");
    if (fs::exists(p)) e.detections = read_detections(p.string());
    images.push_back(std::move(e));
  }
  const EvalResult r = evaluate(images, cfg.eval_ious, cfg.post.count_threshold);
  if (!report.empty()) {
    if (report.has_parent_path()) fs::create_directories(report.parent_path());
    write_file(report, format_report(r), "eval-metrics");
  }
  return r;
}

}  // namespace ganet

#endif  // GANET_PIPELINE_HPP_
