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
#ifndef GANET_NET_HPP_
#define GANET_NET_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ganet/autodiff.hpp"
#include "ganet/params.hpp"
#include "ganet/rng.hpp"

namespace ganet {

enum class Fusion { kBackgroundAttention, kFpn };

inline std::string to_string(Fusion f) { return f == Fusion::kFpn ? "fpn" : "ba"; }

inline Fusion parse_fusion(const std::string& s) {
  if (s == "ba") return Fusion::kBackgroundAttention;
  if (s == "fpn") return Fusion::kFpn;
  fail("detector-net", "unknown fusion mode '" + s + "' (expected ba or fpn)");
}

struct NetConfig {
  std::size_t in_channels = 1;
  std::size_t stem_channels = 8;
  std::array<std::size_t, 4> channels{8, 16, 32, 64};
  std::size_t input_h = 64;
  std::size_t input_w = 64;
  Fusion fusion = Fusion::kBackgroundAttention;
  std::uint64_t seed = 0;
};

// Stride of the prediction maps relative to the input image.
inline constexpr std::size_t kOutputStride = 2;
inline constexpr std::size_t kNumLevels = 4;

template <typename T>
struct NetOutputs {
  Tensor<T>* score = nullptr;     // (n, 1, H/2, W/2), sigmoid
  Tensor<T>* location = nullptr;  // (n, 4, H/2, W/2), l t r b in pixels
  Tensor<T>* corners = nullptr;   // (n, 4, H/2, W/2), tl tr bl br, sigmoid
  std::vector<Tensor<T>*> ba_logits;  // one (n, 1, 1, 1) per BA level, deepest first
};

template <typename T>
struct BaResult {
  Tensor<T>* fused;
  Tensor<T>* logit;
};

// Backbone parameter count in closed form; used to cross-check the builder.
inline std::size_t backbone_param_count(const NetConfig& cfg) {
  std::size_t total = 0;
  std::size_t cin = cfg.in_channels;
  for (std::size_t l = 0; l < kNumLevels; ++l) {
    const std::size_t mid = l == 0 ? cfg.stem_channels : cfg.channels[l];
    const std::size_t cout = cfg.channels[l];
    total += 9 * cin * mid + mid + 9 * mid * cout + cout;
    cin = cout;
  }
  return total;
}

// Miniature four-stage backbone, a top-down fusion chain (background
// attention or plain lateral FPN) and three 1x1 prediction heads on the
// stride-2 fused map.
template <typename T>
class Detector {
 public:
  explicit Detector(NetConfig cfg) : cfg_(cfg) {
    build();
    initialize(cfg_.seed);
  }

  const NetConfig& config() const { return cfg_; }
  ParamSet<T>& params() { return params_; }
  const ParamSet<T>& params() const { return params_; }

  // He-uniform for convolutions feeding a relu, LeCun-uniform for the linear
  // fusion and head convolutions, zero biases. The location head starts at
  // zero weights so every predicted distance begins at exp(0) * stride.
  void initialize(std::uint64_t seed) {
    Rng rng(seed);
    for (auto& e : params_.entries()) {
      const Shape s = e.tensor.shape();
      if (e.name.ends_with(".bias") || e.name.starts_with("head.location")) {
        e.tensor.fill(T(0));
        continue;
      }
      const bool feeds_relu = e.name.starts_with("backbone.") || e.name.ends_with(".act.weight");
      const double fan_in = static_cast<double>(s.c * s.h * s.w);
      const double bound = std::sqrt((feeds_relu ? 6.0 : 3.0) / fan_in);
      for (auto& v : e.tensor.values()) v = static_cast<T>(rng.uniform(-bound, bound));
    }
  }

  std::array<Tensor<T>*, kNumLevels> forward_backbone(Tape<T>& tape, Tensor<T>& image) {
    const Shape is = image.shape();
    require(is.c == cfg_.in_channels, "detector-net",
            "image has " + std::to_string(is.c) + " channels, model expects " + std::to_string(cfg_.in_channels));
    require(is.h % 16 == 0 && is.w % 16 == 0 && is.h > 0 && is.w > 0, "detector-net",
            "image size must be divisible by 16, got " + is.str());
    std::array<Tensor<T>*, kNumLevels> side{};
    Tensor<T>* x = &image;
    for (std::size_t l = 0; l < kNumLevels; ++l) {
      const std::string p = "backbone.stage" + std::to_string(l + 1);
      x = &conv(tape, *x, p + ".conv1", 1);
      x = &ops::relu(tape, *x);
      x = &conv(tape, *x, p + ".conv2", 1);
      x = &ops::relu(tape, *x);
      x = &ops::maxpool2(tape, *x);
      side[l] = x;
    }
    return side;
  }

  // One background-attention block: gates the lateral features `s` with a
  // channel vector derived from the upsampled deeper map `r_next`.
  BaResult<T> ba_fuse(Tape<T>& tape, Tensor<T>& s, Tensor<T>& r_next, std::size_t level) {
    check_strides(s, r_next);
    const std::string p = "ba" + std::to_string(level);
    Tensor<T>& ru = ops::upsample2(tape, r_next);
    Tensor<T>& rw = conv(tape, ru, p + ".up", 1);
    Tensor<T>& vw = ops::global_avg_pool(tape, rw);
    Tensor<T>& vc = ops::relu(tape, conv(tape, vw, p + ".act", 0));
    Tensor<T>& logit = conv(tape, vc, p + ".cls", 0);
    Tensor<T>& g1 = conv(tape, vc, p + ".gate1", 0);
    Tensor<T>& tc = ops::sigmoid(tape, conv(tape, g1, p + ".gate2", 0));
    Tensor<T>& f = ops::channel_scale(tape, s, tc);
    Tensor<T>& merged = ops::add(tape, f, rw);
    Tensor<T>& r = conv(tape, conv(tape, merged, p + ".fuse1", 0), p + ".fuse3", 1);
    return {&r, &logit};
  }

  Tensor<T>& fpn_fuse(Tape<T>& tape, Tensor<T>& s, Tensor<T>& r_next, std::size_t level) {
    check_strides(s, r_next);
    const std::string p = "fpn" + std::to_string(level);
    Tensor<T>& lateral = conv(tape, s, p + ".lateral", 0);
    Tensor<T>& up = ops::upsample2(tape, r_next);
    return conv(tape, ops::add(tape, lateral, up), p + ".smooth", 1);
  }

  NetOutputs<T> forward(Tape<T>& tape, Tensor<T>& image) {
    auto side = forward_backbone(tape, image);
    NetOutputs<T> out;
    Tensor<T>* r = side[3];
    for (std::size_t level = 3; level >= 1; --level) {
      Tensor<T>& s = *side[level - 1];
      if (cfg_.fusion == Fusion::kBackgroundAttention) {
        auto res = ba_fuse(tape, s, *r, level);
        r = res.fused;
        out.ba_logits.push_back(res.logit);
      } else {
        r = &fpn_fuse(tape, s, *r, level);
      }
    }
    out.score = &ops::sigmoid(tape, conv(tape, *r, "head.score", 0));
    out.corners = &ops::sigmoid(tape, conv(tape, *r, "head.corner", 0));
    Tensor<T>& raw = conv(tape, *r, "head.location", 0);
    out.location = &ops::scale(tape, ops::exp(tape, raw), static_cast<T>(kOutputStride));
    return out;
  }

 private:
  Tensor<T>& conv(Tape<T>& tape, Tensor<T>& x, const std::string& name, int pad) {
    return ops::conv2d(tape, x, params_.get(name + ".weight"), params_.get(name + ".bias"), 1, pad);
  }

  void check_strides(const Tensor<T>& s, const Tensor<T>& r_next) const {
    require(s.shape().h == 2 * r_next.shape().h && s.shape().w == 2 * r_next.shape().w, "detector-net",
            "fusion stride mismatch: lateral " + s.shape().str() + " vs deeper " + r_next.shape().str());
  }

  void add_conv(const std::string& name, std::size_t cin, std::size_t cout, std::size_t k) {
    params_.add(name + ".weight", Shape{cout, cin, k, k});
    params_.add(name + ".bias", Shape{1, cout, 1, 1});
  }

  void build() {
    for (std::size_t c : cfg_.channels) require(c > 0, "detector-net", "channel widths must be positive");
    require(cfg_.in_channels > 0 && cfg_.stem_channels > 0, "detector-net", "channel widths must be positive");
    std::size_t cin = cfg_.in_channels;
    for (std::size_t l = 0; l < kNumLevels; ++l) {
      const std::string p = "backbone.stage" + std::to_string(l + 1);
      const std::size_t mid = l == 0 ? cfg_.stem_channels : cfg_.channels[l];
      add_conv(p + ".conv1", cin, mid, 3);
      add_conv(p + ".conv2", mid, cfg_.channels[l], 3);
      cin = cfg_.channels[l];
    }
    // Fused maps keep the channel width of their lateral input.
    for (std::size_t level = 3; level >= 1; --level) {
      const std::size_t c = cfg_.channels[level - 1];
      const std::size_t c_deep = cfg_.channels[level];
      if (cfg_.fusion == Fusion::kBackgroundAttention) {
        const std::string p = "ba" + std::to_string(level);
        add_conv(p + ".up", c_deep, c, 3);
        add_conv(p + ".act", c, c, 1);
        add_conv(p + ".cls", c, 1, 1);
        add_conv(p + ".gate1", c, c, 1);
        add_conv(p + ".gate2", c, c, 1);
        add_conv(p + ".fuse1", c, c, 1);
        add_conv(p + ".fuse3", c, c, 3);
      } else {
        const std::string p = "fpn" + std::to_string(level);
        add_conv(p + ".lateral", c, c_deep, 1);
        add_conv(p + ".smooth", c_deep, c, 3);
      }
    }
    const std::size_t c1 = cfg_.channels[0];
    add_conv("head.score", c1, 1, 1);
    add_conv("head.corner", c1, 4, 1);
    add_conv("head.location", c1, 4, 1);
  }

  NetConfig cfg_;
  ParamSet<T> params_;
};

// Maps 8-bit pixel values to roughly zero-mean, unit-scale network input.
template <typename T>
T normalize_pixel(double v) {
  return static_cast<T>((v - 128.0) / 64.0);
}

}  // namespace ganet

#endif  // GANET_NET_HPP_
