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
#ifndef GANET_AUGMENT_HPP_
#define GANET_AUGMENT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ganet/box.hpp"
#include "ganet/error.hpp"
#include "ganet/image.hpp"
#include "ganet/perlin.hpp"
#include "ganet/rng.hpp"

namespace ganet {

enum class NoiseKind { kWhite, kBlack, kPerlin };

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kBlack: return "black";
    case NoiseKind::kPerlin: return "perlin";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(const std::string& s) {
  if (s == "white") return NoiseKind::kWhite;
  if (s == "black") return NoiseKind::kBlack;
  if (s == "perlin") return NoiseKind::kPerlin;
  fail("augmentation", "unknown noise kind '" + s + "' (expected white, black or perlin)");
}

struct NoiseMap {
  NoiseKind kind = NoiseKind::kWhite;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;  // row-major, in [0, 255]
  std::uint64_t seed = 0;
  double base_frequency = 0.0;
  int octaves = 0;
};

inline constexpr double kDefaultPerlinFrequency = 4.0;
inline constexpr int kDefaultPerlinOctaves = 4;

// Fractal Perlin map. `base_frequency` is the number of lattice cells across
// the shorter image side; the result is rescaled affinely onto [0, 255].
inline NoiseMap perlin_map(std::size_t w, std::size_t h, std::uint64_t seed, double base_frequency = kDefaultPerlinFrequency,
                           int octaves = kDefaultPerlinOctaves) {
  require(w >= 1 && h >= 1 && octaves >= 1, "augmentation", "perlin_map needs w, h, octaves >= 1");
  NoiseMap m{NoiseKind::kPerlin, w, h, std::vector<double>(w * h), seed, base_frequency, octaves};
  const PerlinNoise noise(seed);
  const double step = base_frequency / static_cast<double>(std::min(w, h));
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      m.values[y * w + x] = noise.fractal(static_cast<double>(x) * step, static_cast<double>(y) * step, octaves);
    }
  }
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  const double vmin = *lo;
  const double range = *hi - vmin;
  for (auto& v : m.values) v = range > 0.0 ? (v - vmin) * (255.0 / range) : 127.5;
  return m;
}

inline NoiseMap brightness_map(std::size_t w, std::size_t h, NoiseKind kind) {
  require(kind != NoiseKind::kPerlin, "augmentation", "brightness_map takes white or black");
  return NoiseMap{kind, w, h, std::vector<double>(w * h, kind == NoiseKind::kWhite ? 255.0 : 0.0), 0, 0.0, 0};
}

struct BlendParams {
  double alpha = 1.0;
  double gamma = 0.0;
  double beta() const { return 1.0 - alpha; }
};

// Φ = α·I + (1 − α)·M + γ per pixel and channel, clamped to [0, 255] and
// rounded half-up.
inline Image blend(const Image& img, const NoiseMap& noise, const BlendParams& p) {
  require(img.width == noise.width && img.height == noise.height, "augmentation",
          "noise map " + std::to_string(noise.width) + "x" + std::to_string(noise.height) + " does not match image " +
              std::to_string(img.width) + "x" + std::to_string(img.height));
  require(p.alpha >= 0.0 && p.alpha <= 1.0, "augmentation", "alpha must lie in [0,1]");
  Image out = img;
  const double beta = p.beta();
  for (std::size_t y = 0; y < img.height; ++y) {
    for (std::size_t x = 0; x < img.width; ++x) {
      const double m = noise.values[y * img.width + x];
      for (std::size_t c = 0; c < img.channels; ++c) {
        out.at(x, y, c) = round_clamp_u8(p.alpha * img.at(x, y, c) + beta * m + p.gamma);
      }
    }
  }
  return out;
}

struct AugmentConfig {
  std::vector<double> alphas{0.1, 0.3, 0.5, 0.7, 0.8, 0.9, 1.0};
  double gamma_min = -20.0;
  double gamma_max = 20.0;
  std::vector<NoiseKind> kinds{NoiseKind::kWhite, NoiseKind::kBlack, NoiseKind::kPerlin};
  // Probability that a crop is blended at all.
  double probability = 1.0;
  std::vector<double> scales{0.5, 1.0, 2.0, 3.0};
  // When set, scales are drawn uniformly from [scales.front(), scales.back()].
  bool continuous_scale = false;
  std::size_t out_size = 64;

  void validate() const {
    require(!alphas.empty(), "augmentation", "alpha set must not be empty");
    for (double a : alphas) require(a >= 0.0 && a <= 1.0, "augmentation", "alpha values must lie in [0,1]");
    require(gamma_min <= gamma_max, "augmentation", "gamma_min must not exceed gamma_max");
    require(!kinds.empty(), "augmentation", "noise kind set must not be empty");
    require(probability >= 0.0 && probability <= 1.0, "augmentation", "augment probability must lie in [0,1]");
    require(!scales.empty(), "augmentation", "scale set must not be empty");
    for (double s : scales) require(s > 0.0, "augmentation", "scales must be positive");
    require(out_size >= 16 && out_size % 16 == 0, "augmentation", "out_size must be a positive multiple of 16");
  }
};

inline BlendParams sample_blend_params(Rng& rng, const AugmentConfig& cfg) {
  BlendParams p;
  p.alpha = rng.pick(cfg.alphas);
  p.gamma = rng.uniform(cfg.gamma_min, cfg.gamma_max);
  return p;
}

// Draws a noise kind and blend parameters and applies them.
inline Image augment_image(const Image& img, Rng& rng, const AugmentConfig& cfg) {
  if (rng.uniform() >= cfg.probability) return img;
  const NoiseKind kind = rng.pick(cfg.kinds);
  const BlendParams p = sample_blend_params(rng, cfg);
  const NoiseMap m = kind == NoiseKind::kPerlin ? perlin_map(img.width, img.height, rng.next_u64())
                                                 : brightness_map(img.width, img.height, kind);
  return blend(img, m, p);
}

struct CropPair {
  Image image;
  std::vector<Box> boxes;  // crop coordinates
  int label = -1;
  double scale = 1.0;
  // Window origin in rescaled-image coordinates.
  std::ptrdiff_t x0 = 0;
  std::ptrdiff_t y0 = 0;
};

struct CropResult {
  CropPair positive;
  CropPair negative;
};

inline constexpr int kCropAttempts = 100;

namespace detail {

inline std::vector<Box> boxes_in_window(const std::vector<Box>& scaled, std::ptrdiff_t x0, std::ptrdiff_t y0,
                                        std::size_t size) {
  const Box window{static_cast<double>(x0), static_cast<double>(y0), static_cast<double>(x0) + static_cast<double>(size),
                   static_cast<double>(y0) + static_cast<double>(size)};
  std::vector<Box> out;
  for (const auto& b : scaled) {
    if (intersection_area(b, window) <= 0.0) continue;
    const Box shifted{b.x1 - window.x1, b.y1 - window.y1, b.x2 - window.x1, b.y2 - window.y1};
    out.push_back(clip_box(shifted, static_cast<double>(size), static_cast<double>(size)));
  }
  return out;
}

}  // namespace detail

// Rescales the scene and cuts one window that fully contains at least one
// object (label +1) and one window that touches no object (label -1).
inline CropResult gen_crop_pair(const Image& image, const std::vector<Box>& boxes, Rng& rng, const AugmentConfig& cfg) {
  require(!boxes.empty(), "augmentation", "positive crop needs at least one ground-truth box");
  const std::size_t out = cfg.out_size;
  const auto outd = static_cast<double>(out);

  for (int attempt = 0; attempt < kCropAttempts; ++attempt) {
    const double s = cfg.continuous_scale ? rng.uniform(cfg.scales.front(), cfg.scales.back()) : rng.pick(cfg.scales);
    const auto sw = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(image.width) * s)));
    const auto sh = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(image.height) * s)));
    const double fx = static_cast<double>(sw) / static_cast<double>(image.width);
    const double fy = static_cast<double>(sh) / static_cast<double>(image.height);
    std::vector<Box> scaled;
    std::vector<std::size_t> fitting;
    for (const auto& b : boxes) {
      scaled.push_back(Box{b.x1 * fx, b.y1 * fy, b.x2 * fx, b.y2 * fy});
      const Box& sb = scaled.back();
      // Integer window origins must exist on both axes.
      if (std::ceil(sb.x2 - outd) <= std::floor(sb.x1) && std::ceil(sb.y2 - outd) <= std::floor(sb.y1)) {
        fitting.push_back(scaled.size() - 1);
      }
    }
    if (fitting.empty()) continue;
    const Image rescaled = (sw == image.width && sh == image.height) ? image : resize_bilinear(image, sw, sh);

    CropResult r;
    const Box& anchor = scaled[rng.pick(fitting)];
    const auto px0 = rng.uniform_int(static_cast<std::int64_t>(std::ceil(anchor.x2 - outd)),
                                     static_cast<std::int64_t>(std::floor(anchor.x1)));
    const auto py0 = rng.uniform_int(static_cast<std::int64_t>(std::ceil(anchor.y2 - outd)),
                                     static_cast<std::int64_t>(std::floor(anchor.y1)));
    r.positive.image = crop_with_padding(rescaled, px0, py0, out, out);
    r.positive.boxes = detail::boxes_in_window(scaled, px0, py0, out);
    r.positive.label = 1;
    r.positive.scale = s;
    r.positive.x0 = px0;
    r.positive.y0 = py0;

    // Negative window: may extend past the image; falls back to pure padding.
    std::ptrdiff_t nx0 = static_cast<std::ptrdiff_t>(sw);
    std::ptrdiff_t ny0 = static_cast<std::ptrdiff_t>(sh);
    for (int k = 0; k < kCropAttempts; ++k) {
      const auto cx = rng.uniform_int(1 - static_cast<std::int64_t>(out), static_cast<std::int64_t>(sw) - 1);
      const auto cy = rng.uniform_int(1 - static_cast<std::int64_t>(out), static_cast<std::int64_t>(sh) - 1);
      const Box window{static_cast<double>(cx), static_cast<double>(cy), static_cast<double>(cx) + outd,
                       static_cast<double>(cy) + outd};
      const bool clear = std::none_of(scaled.begin(), scaled.end(),
                                      [&window](const Box& b) { return intersection_area(b, window) > 0.0; });
      if (clear) {
        nx0 = cx;
        ny0 = cy;
        break;
      }
    }
    r.negative.image = crop_with_padding(rescaled, nx0, ny0, out, out);
    r.negative.label = -1;
    r.negative.scale = s;
    r.negative.x0 = nx0;
    r.negative.y0 = ny0;
    return r;
  }
  fail("augmentation", "no scale in " + std::to_string(kCropAttempts) + " attempts lets a box fit the crop window");
}

}  // namespace ganet

#endif  // GANET_AUGMENT_HPP_
