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
#ifndef GANET_TRAIN_HPP_
#define GANET_TRAIN_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ganet/augment.hpp"
#include "ganet/checkpoint.hpp"
#include "ganet/config.hpp"
#include "ganet/image.hpp"
#include "ganet/losses.hpp"
#include "ganet/net.hpp"
#include "ganet/optim.hpp"
#include "ganet/postprocess.hpp"
#include "ganet/synth.hpp"
#include "ganet/targets.hpp"

namespace ganet {

struct LossLogRow {
  std::uint64_t iter = 0;
  double loss = 0.0;
  double loc = 0.0;
  double score = 0.0;
  double foreground = 0.0;
  double background = 0.0;
  double lr = 0.0;
};

// `iter loss l_loc l_sco l_fa l_ba lr`
inline std::string format_log_row(const LossLogRow& r) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%llu %.6f %.6f %.6f %.6f %.6f %.6g\n", static_cast<unsigned long long>(r.iter), r.loss,
                r.loc, r.score, r.foreground, r.background, r.lr);
  return buf;
}

template <typename T>
struct TrainingBatch {
  Tensor<T> images;
  std::vector<TargetMaps> targets;
  std::vector<int> labels;
};

// One positive and one negative crop per sample, each independently blended.
template <typename T>
TrainingBatch<T> make_batch(const std::vector<const SceneSample*>& samples, Rng& rng, const RunConfig& cfg) {
  const std::size_t size = cfg.augment.out_size;
  const std::size_t channels = cfg.model.in_channels;
  TrainingBatch<T> b;
  b.images = Tensor<T>(Shape{2 * samples.size(), channels, size, size});
  std::size_t n = 0;
  for (const SceneSample* s : samples) {
    Rng srng(rng.fork());
    const CropResult crops = gen_crop_pair(s->image, s->boxes, srng, cfg.augment);
    for (const CropPair* c : {&crops.positive, &crops.negative}) {
      const Image img = augment_image(c->image, srng, cfg.augment);
      write_input(img, b.images, n++);
      b.targets.push_back(encode_targets(c->boxes, size, size, kOutputStride));
      b.labels.push_back(c->label);
    }
  }
  return b;
}

// Owns the model, optimizer state and data stream of one training run. Every
// random draw derives from the run seed, so a run is reproducible bit for bit.
class Trainer {
 public:
  Trainer(RunConfig cfg, const std::vector<SceneSample>& data)
      : cfg_(std::move(cfg)), model_(model_config(cfg_)), adam_(model_.params()), rng_(cfg_.seed) {
    for (const auto& s : data) {
      if (!s.boxes.empty()) pool_.push_back(&s);
    }
    require(!pool_.empty(), "cli-harness", "training set has no image with objects");
  }

  static NetConfig model_config(const RunConfig& cfg) {
    NetConfig m = cfg.model;
    m.seed = cfg.seed;
    return m;
  }

  Detector<float>& model() { return model_; }
  std::uint64_t iteration() const { return iter_; }

  LossLogRow step() {
    std::vector<const SceneSample*> picks;
    for (std::size_t i = 0; i < cfg_.schedule.batch_size; ++i) picks.push_back(next_sample());
    auto batch = make_batch<float>(picks, rng_, cfg_);

    Tape<float> tape;
    const auto out = model_.forward(tape, batch.images);
    const auto terms = total_loss(tape, out, std::span<const TargetMaps>(batch.targets),
                                  std::span<const int>(batch.labels), cfg_.loss);
    LossLogRow row;
    row.iter = iter_;
    row.loss = terms.total->item();
    row.loc = terms.loc->item();
    row.score = terms.score->item();
    row.foreground = terms.foreground->item();
    row.background = terms.background->item();
    row.lr = decayed_learning_rate(cfg_.schedule.initial_lr, cfg_.schedule.decay_rate, cfg_.schedule.decay_every, iter_);
    require(std::isfinite(row.loss), "cli-harness", "non-finite loss at iteration " + std::to_string(iter_));
    tape.backward(*terms.total);
    adam_step(model_.params(), adam_, row.lr);
    ++iter_;
    return row;
  }

 private:
  const SceneSample* next_sample() {
    if (cursor_ == order_.size()) {
      order_.resize(pool_.size());
      for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
      rng_.shuffle(order_);
      cursor_ = 0;
    }
    return pool_[order_[cursor_++]];
  }

  RunConfig cfg_;
  Detector<float> model_;
  AdamState<float> adam_;
  Rng rng_;
  std::vector<const SceneSample*> pool_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::uint64_t iter_ = 0;
};

struct TrainResult {
  std::vector<LossLogRow> log;
  std::filesystem::path checkpoint;
};

// Trains for cfg.schedule.max_iters iterations. Writes effective_config.txt,
// train_log.txt (config echoed as '#' lines, then one row per iteration) and
// model.ckpt, refreshed every checkpoint_every iterations. On a non-finite
// loss the run aborts and the last written checkpoint is left in place.
inline TrainResult train_loop(const RunConfig& cfg, const std::vector<SceneSample>& data,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string cfg_text = format_config(cfg);
  {
    std::ofstream os(out_dir / "effective_config.txt", std::ios::binary | std::ios::trunc);
    os << cfg_text;
  }
  std::ofstream log(out_dir / "train_log.txt", std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(log), "cli-harness", "cannot write training log in " + out_dir.string());
  std::istringstream cfg_lines(cfg_text);
  for (std::string line; std::getline(cfg_lines, line);) log << "# " << line << "\n";
  log << "# iter loss l_loc l_sco l_fa l_ba lr\n";

  Trainer trainer(cfg, data);
  TrainResult result;
  result.checkpoint = out_dir / "model.ckpt";
  save_checkpoint(result.checkpoint.string(), trainer.model().params());
  for (std::uint64_t i = 0; i < cfg.schedule.max_iters; ++i) {
    const LossLogRow row = trainer.step();
    log << format_log_row(row);
    result.log.push_back(row);
    if ((i + 1) % cfg.schedule.checkpoint_every == 0 || i + 1 == cfg.schedule.max_iters) {
      log.flush();
      save_checkpoint(result.checkpoint.string(), trainer.model().params());
    }
  }
  return result;
}

// Runs the network on one image and returns its prediction maps.
template <typename T>
PredictionMaps predict(Detector<T>& model, const Image& img) {
  Tensor<T> input = image_to_tensor<T>(img);
  Tape<T> tape(false);
  const auto out = model.forward(tape, input);
  return extract_maps(out, 0);
}

template <typename T>
RankedDetections detect_image(Detector<T>& model, const Image& img, const PostprocessConfig& cfg) {
  const PredictionMaps m = predict(model, img);
  return postprocess(m, static_cast<double>(img.width), static_cast<double>(img.height), cfg);
}

// Mean background-attention logit over levels, per image of `crop`.
template <typename T>
double ba_score(Detector<T>& model, const Image& crop) {
  Tensor<T> input = image_to_tensor<T>(crop);
  Tape<T> tape(false);
  const auto out = model.forward(tape, input);
  require(!out.ba_logits.empty(), "cli-harness", "model has no background-attention logits");
  double acc = 0.0;
  for (const auto* l : out.ba_logits) acc += static_cast<double>(l->item());
  return acc / static_cast<double>(out.ba_logits.size());
}

}  // namespace ganet

#endif  // GANET_TRAIN_HPP_
