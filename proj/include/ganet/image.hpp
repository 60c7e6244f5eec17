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
#ifndef GANET_IMAGE_HPP_
#define GANET_IMAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ganet/error.hpp"
#include "ganet/net.hpp"
#include "ganet/tensor.hpp"

namespace ganet {

// 8-bit image, interleaved channels (1 = gray, 3 = RGB), row-major.
struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(std::size_t w, std::size_t h, std::size_t c, std::uint8_t fill = 0)
      : width(w), height(h), channels(c), pixels(w * h * c, fill) {}

  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c = 0) { return pixels[(y * width + x) * channels + c]; }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return pixels[(y * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

inline std::uint8_t round_clamp_u8(double v) {
  v = std::clamp(v, 0.0, 255.0);
  return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

// Bilinear resize with half-pixel sampling and edge clamping.
inline Image resize_bilinear(const Image& src, std::size_t new_w, std::size_t new_h) {
  require(new_w > 0 && new_h > 0 && src.width > 0 && src.height > 0, "augmentation", "resize to empty image");
  Image out(new_w, new_h, src.channels);
  const double sx = static_cast<double>(src.width) / static_cast<double>(new_w);
  const double sy = static_cast<double>(src.height) / static_cast<double>(new_h);
  for (std::size_t y = 0; y < new_h; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, src.height - 1);
    const double wy = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < new_w; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, src.width - 1);
      const double wx = fx - static_cast<double>(x0);
      for (std::size_t c = 0; c < src.channels; ++c) {
        const double v = (1 - wy) * ((1 - wx) * src.at(x0, y0, c) + wx * src.at(x1, y0, c)) +
                         wy * ((1 - wx) * src.at(x0, y1, c) + wx * src.at(x1, y1, c));
        out.at(x, y, c) = round_clamp_u8(v);
      }
    }
  }
  return out;
}

// Window [x0, x0 + w) x [y0, y0 + h); pixels outside the source are zero.
inline Image crop_with_padding(const Image& src, std::ptrdiff_t x0, std::ptrdiff_t y0, std::size_t w, std::size_t h) {
  Image out(w, h, src.channels, 0);
  for (std::size_t y = 0; y < h; ++y) {
    const std::ptrdiff_t sy = y0 + static_cast<std::ptrdiff_t>(y);
    if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(src.height)) continue;
    for (std::size_t x = 0; x < w; ++x) {
      const std::ptrdiff_t sx = x0 + static_cast<std::ptrdiff_t>(x);
      if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(src.width)) continue;
      for (std::size_t c = 0; c < src.channels; ++c) {
        out.at(x, y, c) = src.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy), c);
      }
    }
  }
  return out;
}

// Writes `img` as image `n` of a (N, C, H, W) network input batch.
template <typename T>
void write_input(const Image& img, Tensor<T>& batch, std::size_t n) {
  const Shape s = batch.shape();
  require(s.c == img.channels && s.h == img.height && s.w == img.width && n < s.n, "detector-net",
          "image does not match input tensor " + s.str());
  for (std::size_t c = 0; c < s.c; ++c) {
    for (std::size_t y = 0; y < s.h; ++y) {
      for (std::size_t x = 0; x < s.w; ++x) batch.at(n, c, y, x) = normalize_pixel<T>(img.at(x, y, c));
    }
  }
}

template <typename T>
Tensor<T> image_to_tensor(const Image& img) {
  Tensor<T> t(Shape{1, img.channels, img.height, img.width});
  write_input(img, t, 0);
  return t;
}

}  // namespace ganet

#endif  // GANET_IMAGE_HPP_
