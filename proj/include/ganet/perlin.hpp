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
#ifndef GANET_PERLIN_HPP_
#define GANET_PERLIN_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ganet/rng.hpp"

namespace ganet {

// Two-dimensional improved gradient noise: quintic fade, a seeded
// permutation table, and eight unit gradients at 45 degree spacing.
class PerlinNoise {
 public:
  // Largest magnitude a single octave can reach with unit gradients.
  static constexpr double kBound = 0.70710678118654752440;

  explicit PerlinNoise(std::uint64_t seed) {
    std::vector<int> p(256);
    std::iota(p.begin(), p.end(), 0);
    Rng rng(seed);
    rng.shuffle(p);
    for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
  }

  double raw(double x, double y) const {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int xi = static_cast<int>(static_cast<std::int64_t>(fx) & 255);
    const int yi = static_cast<int>(static_cast<std::int64_t>(fy) & 255);
    const double xf = x - fx;
    const double yf = y - fy;
    const double u = fade(xf);
    const double v = fade(yf);
    const int aa = perm_[perm_[xi] + yi];
    const int ab = perm_[perm_[xi] + yi + 1];
    const int ba = perm_[perm_[xi + 1] + yi];
    const int bb = perm_[perm_[xi + 1] + yi + 1];
    const double x1 = lerp(grad(aa, xf, yf), grad(ba, xf - 1.0, yf), u);
    const double x2 = lerp(grad(ab, xf, yf - 1.0), grad(bb, xf - 1.0, yf - 1.0), u);
    return lerp(x1, x2, v);
  }

  // Octave sum with persistence 0.5 and lacunarity 2.
  double fractal(double x, double y, int octaves) const {
    double total = 0.0;
    double amp = 1.0;
    double freq = 1.0;
    for (int o = 0; o < octaves; ++o) {
      total += amp * raw(x * freq, y * freq);
      amp *= 0.5;
      freq *= 2.0;
    }
    return total;
  }

 private:
  static double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
  static double lerp(double a, double b, double t) { return a + t * (b - a); }
  static double grad(int hash, double x, double y) {
    static constexpr double d = 0.70710678118654752440;
    static constexpr std::array<std::array<double, 2>, 8> g{
        {{1.0, 0.0}, {d, d}, {0.0, 1.0}, {-d, d}, {-1.0, 0.0}, {-d, -d}, {0.0, -1.0}, {d, -d}}};
    const auto& v = g[static_cast<std::size_t>(hash & 7)];
    return v[0] * x + v[1] * y;
  }

  std::array<int, 512> perm_{};
};

}  // namespace ganet

#endif  // GANET_PERLIN_HPP_
