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
#ifndef GANET_SYNTH_HPP_
#define GANET_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "ganet/augment.hpp"
#include "ganet/box.hpp"
#include "ganet/image.hpp"
#include "ganet/rng.hpp"

namespace ganet {

struct SceneSample {
  std::string name;
  Image image;
  std::vector<Box> boxes;
  std::uint64_t seed = 0;
  // Objects requested but not placed within the attempt budget.
  std::size_t placement_shortfall = 0;
};

struct SceneConfig {
  std::size_t size = 64;
  std::size_t min_objects = 1;
  std::size_t max_objects = 6;
  std::size_t min_object_size = 8;
  std::size_t max_object_size = 16;

  void validate() const {
    require(size >= 32, "synthetic-data", "scene size must be at least 32");
    require(min_objects <= max_objects, "synthetic-data", "min_objects exceeds max_objects");
    require(min_object_size >= 4 && min_object_size <= max_object_size, "synthetic-data",
            "object size range must satisfy 4 <= min <= max");
    require(max_object_size + 4 <= size, "synthetic-data", "objects must fit inside the scene");
  }
};

inline constexpr int kPlacementAttempts = 200;
// Free margin kept around every object, so no two boxes touch.
inline constexpr double kObjectGap = 2.0;
inline constexpr double kMinContrast = 50.0;
inline constexpr double kMaxContrast = 80.0;

namespace detail {

inline double ring_mean(const Image& img, const Box& b, double width) {
  double acc = 0.0;
  std::size_t n = 0;
  const auto x_lo = static_cast<std::ptrdiff_t>(b.x1 - width);
  const auto y_lo = static_cast<std::ptrdiff_t>(b.y1 - width);
  const auto x_hi = static_cast<std::ptrdiff_t>(b.x2 + width);
  const auto y_hi = static_cast<std::ptrdiff_t>(b.y2 + width);
  for (auto y = std::max<std::ptrdiff_t>(0, y_lo); y < std::min<std::ptrdiff_t>(y_hi, static_cast<std::ptrdiff_t>(img.height)); ++y) {
    for (auto x = std::max<std::ptrdiff_t>(0, x_lo); x < std::min<std::ptrdiff_t>(x_hi, static_cast<std::ptrdiff_t>(img.width)); ++x) {
      const bool inside = x >= static_cast<std::ptrdiff_t>(b.x1) && x < static_cast<std::ptrdiff_t>(b.x2) &&
                          y >= static_cast<std::ptrdiff_t>(b.y1) && y < static_cast<std::ptrdiff_t>(b.y2);
      if (inside) continue;
      acc += img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
      ++n;
    }
  }
  return n ? acc / static_cast<double>(n) : 128.0;
}

}  // namespace detail

// Grayscale toy scene: low-frequency Perlin texture around gray 128 with
// solid, slightly textured rectangles that stand out by >= 40 gray levels.
inline SceneSample gen_scene(std::uint64_t seed, const SceneConfig& cfg) {
  cfg.validate();
  Rng rng(seed);
  SceneSample s;
  s.seed = seed;
  s.image = Image(cfg.size, cfg.size, 1);
  const NoiseMap bg = perlin_map(cfg.size, cfg.size, rng.next_u64(), 2.0, 3);
  for (std::size_t i = 0; i < bg.values.size(); ++i) s.image.pixels[i] = round_clamp_u8(88.0 + bg.values[i] * (80.0 / 255.0));

  const auto want = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(cfg.min_objects), static_cast<std::int64_t>(cfg.max_objects)));
  int attempts = 0;
  while (s.boxes.size() < want && attempts < kPlacementAttempts) {
    ++attempts;
    const auto w = rng.uniform_int(static_cast<std::int64_t>(cfg.min_object_size), static_cast<std::int64_t>(cfg.max_object_size));
    const auto h = rng.uniform_int(static_cast<std::int64_t>(cfg.min_object_size), static_cast<std::int64_t>(cfg.max_object_size));
    const auto x1 = rng.uniform_int(0, static_cast<std::int64_t>(cfg.size) - w);
    const auto y1 = rng.uniform_int(0, static_cast<std::int64_t>(cfg.size) - h);
    const Box b{static_cast<double>(x1), static_cast<double>(y1), static_cast<double>(x1 + w), static_cast<double>(y1 + h)};
    const Box grown{b.x1 - kObjectGap, b.y1 - kObjectGap, b.x2 + kObjectGap, b.y2 + kObjectGap};
    const bool clear = std::none_of(s.boxes.begin(), s.boxes.end(),
                                    [&grown](const Box& o) { return intersection_area(o, grown) > 0.0; });
    if (!clear) continue;
    s.boxes.push_back(b);
  }
  s.placement_shortfall = want - s.boxes.size();

  // Paint after placement so every ring samples untouched background.
  const Image background = s.image;
  for (const auto& b : s.boxes) {
    const double ring = detail::ring_mean(background, b, kObjectGap);
    double offset = rng.uniform(kMinContrast, kMaxContrast);
    const bool brighter = rng.uniform() < 0.5;
    if ((brighter && ring + offset > 250.0) || (!brighter && ring - offset >= 5.0)) offset = -offset;
    const double base = ring + offset;
    for (auto y = static_cast<std::size_t>(b.y1); y < static_cast<std::size_t>(b.y2); ++y) {
      for (auto x = static_cast<std::size_t>(b.x1); x < static_cast<std::size_t>(b.x2); ++x) {
        s.image.at(x, y) = round_clamp_u8(base + rng.uniform(-4.0, 4.0));
      }
    }
  }
  return s;
}

inline std::vector<SceneSample> gen_corpus(std::uint64_t seed, std::size_t count, const SceneConfig& cfg) {
  std::vector<SceneSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto s = gen_scene(Rng::splitmix(seed * 1000003ULL + i), cfg);
    char name[32];
    std::snprintf(name, sizeof name, "scene_%05zu", i);
    s.name = name;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ganet

#endif  // GANET_SYNTH_HPP_
