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
#ifndef GANET_AUTODIFF_HPP_
#define GANET_AUTODIFF_HPP_

#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ganet/error.hpp"
#include "ganet/tensor.hpp"

namespace ganet {

// Per-forward-pass record of backward closures. Intermediate tensors are owned
// by the tape; parameters and inputs live outside it and only receive
// gradient accumulation.
template <typename T>
class Tape {
 public:
  explicit Tape(bool recording = true) : recording_(recording) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return recording_; }

  Tensor<T>& make(Shape shape) { return owned_.emplace_back(shape); }
  Tensor<T>& adopt(Tensor<T> t) { return owned_.emplace_back(std::move(t)); }

  void record(std::function<void()> fn) {
    if (recording_) backward_fns_.push_back(std::move(fn));
  }

  std::size_t size() const { return backward_fns_.size(); }

  // Intermediate gradients are reset on every call; leaves (parameters and
  // inputs) accumulate across calls until zeroed by the caller.
  void backward(Tensor<T>& loss) {
    require(loss.numel() == 1, "tensor-autodiff",
            "backward() requires a scalar loss, got shape " + loss.shape().str());
    require(recording_, "tensor-autodiff", "backward() on a tape that did not record");
    for (auto& t : owned_) t.clear_grad();
    loss.ensure_grad();
    loss.grad()[0] += T(1);
    for (auto it = backward_fns_.rbegin(); it != backward_fns_.rend(); ++it) (*it)();
  }

 private:
  bool recording_;
  std::deque<Tensor<T>> owned_;
  std::vector<std::function<void()>> backward_fns_;
};

namespace ops {

namespace detail {

template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapRM = Eigen::Map<MatRM<T>>;
template <typename T>
using CMapRM = Eigen::Map<const MatRM<T>>;

template <typename T>
void check_finite([[maybe_unused]] const Tensor<T>& t, [[maybe_unused]] const char* op) {
#ifndef NDEBUG
  for (T v : t.values()) {
    if (!std::isfinite(v)) fail("tensor-autodiff", std::string("non-finite value produced by ") + op);
  }
#endif
}

struct ConvGeometry {
  std::size_t ci, h, w, k, stride, pad, oh, ow;
  std::size_t cols() const { return oh * ow; }
  std::size_t rows() const { return ci * k * k; }
  bool direct() const { return k == 1 && stride == 1 && pad == 0; }
};

template <typename T>
void im2col(const T* src, const ConvGeometry& g, T* col) {
  const std::size_t p_count = g.cols();
  for (std::size_t c = 0; c < g.ci; ++c) {
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        T* row = col + ((c * g.k + ky) * g.k + kx) * p_count;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
          T* dst = row + oy * g.ow;
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) {
            std::fill(dst, dst + g.ow, T(0));
            continue;
          }
          const T* line = src + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
            dst[ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) ? T(0) : line[ix];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, const ConvGeometry& g, T* dst) {
  const std::size_t p_count = g.cols();
  for (std::size_t c = 0; c < g.ci; ++c) {
    for (std::size_t ky = 0; ky < g.k; ++ky) {
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const T* row = col + ((c * g.k + ky) * g.k + kx) * p_count;
        for (std::size_t oy = 0; oy < g.oh; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) - static_cast<std::ptrdiff_t>(g.pad);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
          T* line = dst + (c * g.h + static_cast<std::size_t>(iy)) * g.w;
          const T* src = row + oy * g.ow;
          for (std::size_t ox = 0; ox < g.ow; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) - static_cast<std::ptrdiff_t>(g.pad);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.w)) line[ix] += src[ox];
          }
        }
      }
    }
  }
}

// Half-pixel (align_corners = false) source taps for a 2x upsample along one axis.
struct Taps {
  std::size_t i0, i1;
  double w0, w1;
};

inline std::vector<Taps> upsample_taps(std::size_t in_len) {
  std::vector<Taps> taps(in_len * 2);
  for (std::size_t o = 0; o < taps.size(); ++o) {
    double src = (static_cast<double>(o) + 0.5) / 2.0 - 0.5;
    if (src < 0.0) src = 0.0;
    auto i0 = static_cast<std::size_t>(std::floor(src));
    if (i0 > in_len - 1) i0 = in_len - 1;
    const std::size_t i1 = std::min(i0 + 1, in_len - 1);
    const double frac = src - static_cast<double>(i0);
    taps[o] = {i0, i1, 1.0 - frac, frac};
  }
  return taps;
}

}  // namespace detail

// Cross-correlation with zero padding. weights: (c_out, c_in, k, k);
// bias: (1, c_out, 1, 1).
template <typename T>
Tensor<T>& conv2d(Tape<T>& tape, Tensor<T>& input, Tensor<T>& weights, Tensor<T>& bias, int stride,
                  int pad) {
  const Shape is = input.shape();
  const Shape ws = weights.shape();
  auto dims = [&] { return "input " + is.str() + ", weights " + ws.str(); };
  require(ws.h == ws.w && (ws.h == 1 || ws.h == 3), "tensor-autodiff", "conv2d kernel must be 1x1 or 3x3: " + dims());
  require(stride == 1 || stride == 2, "tensor-autodiff", "conv2d stride must be 1 or 2");
  require(pad >= 0, "tensor-autodiff", "conv2d padding must be non-negative");
  require(ws.c == is.c, "tensor-autodiff", "conv2d channel mismatch: " + dims());
  require(bias.numel() == ws.n, "tensor-autodiff",
          "conv2d bias length " + std::to_string(bias.numel()) + " != output channels " + std::to_string(ws.n));
  const auto k = ws.h;
  const auto p = static_cast<std::size_t>(pad);
  const auto s = static_cast<std::size_t>(stride);
  require(is.h + 2 * p >= k && is.w + 2 * p >= k, "tensor-autodiff", "conv2d input smaller than kernel: " + dims());

  detail::ConvGeometry g{is.c, is.h, is.w, k, s, p, (is.h + 2 * p - k) / s + 1, (is.w + 2 * p - k) / s + 1};
  const std::size_t co = ws.n;
  Tensor<T>& out = tape.make(Shape{is.n, co, g.oh, g.ow});

  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  detail::CMapRM<T> wmat(weights.data(), static_cast<Eigen::Index>(co), static_cast<Eigen::Index>(rows));
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bvec(bias.data(), static_cast<Eigen::Index>(co));
  AlignedVector<T> col(g.direct() ? 0 : rows * cols);

  for (std::size_t img = 0; img < is.n; ++img) {
    const T* src = input.data() + img * is.c * is.h * is.w;
    const T* colp = src;
    if (!g.direct()) {
      detail::im2col(src, g, col.data());
      colp = col.data();
    }
    detail::CMapRM<T> cmat(colp, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    detail::MapRM<T> omat(out.data() + img * co * cols, static_cast<Eigen::Index>(co), static_cast<Eigen::Index>(cols));
    omat.noalias() = wmat * cmat;
    omat.colwise() += bvec;
  }
  detail::check_finite(out, "conv2d");

  tape.record([&input, &weights, &bias, &out, g, co] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    weights.ensure_grad();
    bias.ensure_grad();
    const Shape is = input.shape();
    const std::size_t rows = g.rows();
    const std::size_t cols = g.cols();
    const auto r = static_cast<Eigen::Index>(rows);
    const auto c = static_cast<Eigen::Index>(cols);
    const auto o = static_cast<Eigen::Index>(co);
    detail::CMapRM<T> wmat(weights.data(), o, r);
    detail::MapRM<T> dw(weights.grad_data(), o, r);
    Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>> db(bias.grad_data(), o);
    AlignedVector<T> col(g.direct() ? 0 : rows * cols);
    AlignedVector<T> dcol(g.direct() ? 0 : rows * cols);
    for (std::size_t img = 0; img < is.n; ++img) {
      const std::size_t in_off = img * is.c * is.h * is.w;
      const T* src = input.data() + in_off;
      const T* colp = src;
      if (!g.direct()) {
        detail::im2col(src, g, col.data());
        colp = col.data();
      }
      detail::CMapRM<T> cmat(colp, r, c);
      detail::CMapRM<T> dout(out.grad_data() + img * co * cols, o, c);
      dw.noalias() += dout * cmat.transpose();
      db += dout.rowwise().sum();
      if (g.direct()) {
        detail::MapRM<T> din(input.grad_data() + in_off, r, c);
        din.noalias() += wmat.transpose() * dout;
      } else {
        detail::MapRM<T> dc(dcol.data(), r, c);
        dc.noalias() = wmat.transpose() * dout;
        detail::col2im_add(dcol.data(), g, input.grad_data() + in_off);
      }
    }
  });
  return out;
}

// 2x2 max pooling, stride 2. Ties route the gradient to the first maximum in
// row-major order.
template <typename T>
Tensor<T>& maxpool2(Tape<T>& tape, Tensor<T>& input) {
  const Shape is = input.shape();
  require(is.h % 2 == 0 && is.w % 2 == 0, "tensor-autodiff", "maxpool2 requires even H and W, got " + is.str());
  Tensor<T>& out = tape.make(Shape{is.n, is.c, is.h / 2, is.w / 2});
  std::vector<std::size_t> argmax(out.numel());
  const std::size_t oh = is.h / 2, ow = is.w / 2;
  for (std::size_t nc = 0; nc < is.n * is.c; ++nc) {
    const T* src = input.data() + nc * is.h * is.w;
    for (std::size_t y = 0; y < oh; ++y) {
      for (std::size_t x = 0; x < ow; ++x) {
        std::size_t best = (2 * y) * is.w + 2 * x;
        const std::size_t cand[3] = {best + 1, best + is.w, best + is.w + 1};
        for (std::size_t ci : cand) {
          if (src[ci] > src[best]) best = ci;
        }
        const std::size_t o = nc * oh * ow + y * ow + x;
        out.data()[o] = src[best];
        argmax[o] = nc * is.h * is.w + best;
      }
    }
  }
  tape.record([&input, &out, argmax = std::move(argmax)] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t o = 0; o < argmax.size(); ++o) input.grad()[argmax[o]] += out.grad()[o];
  });
  return out;
}

// Bilinear 2x upsample, half-pixel sampling with edge clamping. The backward
// pass applies the exact transpose of the forward linear map.
template <typename T>
Tensor<T>& upsample2(Tape<T>& tape, Tensor<T>& input) {
  const Shape is = input.shape();
  require(is.h >= 1 && is.w >= 1, "tensor-autodiff", "upsample2 on empty input");
  Tensor<T>& out = tape.make(Shape{is.n, is.c, is.h * 2, is.w * 2});
  const auto ty = detail::upsample_taps(is.h);
  const auto tx = detail::upsample_taps(is.w);
  const std::size_t oh = is.h * 2, ow = is.w * 2;
  for (std::size_t nc = 0; nc < is.n * is.c; ++nc) {
    const T* src = input.data() + nc * is.plane();
    T* dst = out.data() + nc * oh * ow;
    for (std::size_t y = 0; y < oh; ++y) {
      const auto& a = ty[y];
      for (std::size_t x = 0; x < ow; ++x) {
        const auto& b = tx[x];
        dst[y * ow + x] = static_cast<T>(a.w0 * b.w0) * src[a.i0 * is.w + b.i0] +
                          static_cast<T>(a.w0 * b.w1) * src[a.i0 * is.w + b.i1] +
                          static_cast<T>(a.w1 * b.w0) * src[a.i1 * is.w + b.i0] +
                          static_cast<T>(a.w1 * b.w1) * src[a.i1 * is.w + b.i1];
      }
    }
  }
  tape.record([&input, &out, ty, tx] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    const Shape is = input.shape();
    const std::size_t oh = is.h * 2, ow = is.w * 2;
    for (std::size_t nc = 0; nc < is.n * is.c; ++nc) {
      T* din = input.grad_data() + nc * is.plane();
      const T* g = out.grad_data() + nc * oh * ow;
      for (std::size_t y = 0; y < oh; ++y) {
        const auto& a = ty[y];
        for (std::size_t x = 0; x < ow; ++x) {
          const auto& b = tx[x];
          const T gv = g[y * ow + x];
          din[a.i0 * is.w + b.i0] += static_cast<T>(a.w0 * b.w0) * gv;
          din[a.i0 * is.w + b.i1] += static_cast<T>(a.w0 * b.w1) * gv;
          din[a.i1 * is.w + b.i0] += static_cast<T>(a.w1 * b.w0) * gv;
          din[a.i1 * is.w + b.i1] += static_cast<T>(a.w1 * b.w1) * gv;
        }
      }
    }
  });
  return out;
}

template <typename T>
T sigmoid_scalar(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

template <typename T>
Tensor<T>& sigmoid(Tape<T>& tape, Tensor<T>& input) {
  Tensor<T>& out = tape.make(input.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = sigmoid_scalar(input.data()[i]);
  tape.record([&input, &out] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) {
      const T s = out.data()[i];
      input.grad()[i] += out.grad()[i] * s * (T(1) - s);
    }
  });
  return out;
}

template <typename T>
Tensor<T>& relu(Tape<T>& tape, Tensor<T>& input) {
  Tensor<T>& out = tape.make(input.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = std::max(input.data()[i], T(0));
  tape.record([&input, &out] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) {
      if (input.data()[i] > T(0)) input.grad()[i] += out.grad()[i];
    }
  });
  return out;
}

template <typename T>
Tensor<T>& exp(Tape<T>& tape, Tensor<T>& input) {
  Tensor<T>& out = tape.make(input.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = std::exp(input.data()[i]);
  detail::check_finite(out, "exp");
  tape.record([&input, &out] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) input.grad()[i] += out.grad()[i] * out.data()[i];
  });
  return out;
}

template <typename T>
Tensor<T>& scale(Tape<T>& tape, Tensor<T>& input, T factor) {
  Tensor<T>& out = tape.make(input.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = input.data()[i] * factor;
  tape.record([&input, &out, factor] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) input.grad()[i] += out.grad()[i] * factor;
  });
  return out;
}

template <typename T>
Tensor<T>& add(Tape<T>& tape, Tensor<T>& a, Tensor<T>& b) {
  require(a.shape() == b.shape(), "tensor-autodiff",
          "add shape mismatch: " + a.shape().str() + " vs " + b.shape().str());
  Tensor<T>& out = tape.make(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  tape.record([&a, &b, &out] {
    if (!out.has_grad()) return;
    a.ensure_grad();
    b.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) {
      a.grad()[i] += out.grad()[i];
      b.grad()[i] += out.grad()[i];
    }
  });
  return out;
}

template <typename T>
Tensor<T>& mul(Tape<T>& tape, Tensor<T>& a, Tensor<T>& b) {
  require(a.shape() == b.shape(), "tensor-autodiff",
          "mul shape mismatch: " + a.shape().str() + " vs " + b.shape().str());
  Tensor<T>& out = tape.make(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  tape.record([&a, &b, &out] {
    if (!out.has_grad()) return;
    a.ensure_grad();
    b.ensure_grad();
    for (std::size_t i = 0; i < out.numel(); ++i) {
      a.grad()[i] += out.grad()[i] * b.data()[i];
      b.grad()[i] += out.grad()[i] * a.data()[i];
    }
  });
  return out;
}

// Multiplies every channel of `input` (n, c, h, w) by a per-channel factor.
// `factors` is (1, c, 1, 1), shared across the batch, or (n, c, 1, 1).
template <typename T>
Tensor<T>& channel_scale(Tape<T>& tape, Tensor<T>& input, Tensor<T>& factors) {
  const Shape is = input.shape();
  const Shape fs = factors.shape();
  require(fs.h == 1 && fs.w == 1 && fs.c == is.c && (fs.n == 1 || fs.n == is.n), "tensor-autodiff",
          "channel_scale expects factors (1|n, c, 1, 1) for input " + is.str() + ", got " + fs.str());
  Tensor<T>& out = tape.make(is);
  const std::size_t plane = is.plane();
  auto fidx = [fs, is](std::size_t n, std::size_t c) { return (fs.n == 1 ? 0 : n) * is.c + c; };
  for (std::size_t n = 0; n < is.n; ++n) {
    for (std::size_t c = 0; c < is.c; ++c) {
      const T f = factors.data()[fidx(n, c)];
      const std::size_t off = (n * is.c + c) * plane;
      for (std::size_t i = 0; i < plane; ++i) out.data()[off + i] = input.data()[off + i] * f;
    }
  }
  tape.record([&input, &factors, &out, fidx] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    factors.ensure_grad();
    const Shape is = input.shape();
    const std::size_t plane = is.plane();
    for (std::size_t n = 0; n < is.n; ++n) {
      for (std::size_t c = 0; c < is.c; ++c) {
        const std::size_t fi = fidx(n, c);
        const T f = factors.data()[fi];
        const std::size_t off = (n * is.c + c) * plane;
        T acc = T(0);
        for (std::size_t i = 0; i < plane; ++i) {
          input.grad()[off + i] += out.grad()[off + i] * f;
          acc += out.grad()[off + i] * input.data()[off + i];
        }
        factors.grad()[fi] += acc;
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T>& global_avg_pool(Tape<T>& tape, Tensor<T>& input) {
  const Shape is = input.shape();
  require(is.h >= 1 && is.w >= 1, "tensor-autodiff", "global_avg_pool on empty spatial extent " + is.str());
  Tensor<T>& out = tape.make(Shape{is.n, is.c, 1, 1});
  const std::size_t plane = is.plane();
  for (std::size_t nc = 0; nc < is.n * is.c; ++nc) {
    T acc = T(0);
    for (std::size_t i = 0; i < plane; ++i) acc += input.data()[nc * plane + i];
    out.data()[nc] = acc / static_cast<T>(plane);
  }
  tape.record([&input, &out, plane] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    for (std::size_t nc = 0; nc < out.numel(); ++nc) {
      const T g = out.grad()[nc] / static_cast<T>(plane);
      for (std::size_t i = 0; i < plane; ++i) input.grad()[nc * plane + i] += g;
    }
  });
  return out;
}

template <typename T>
Tensor<T>& concat_channels(Tape<T>& tape, Tensor<T>& a, Tensor<T>& b) {
  const Shape as = a.shape();
  const Shape bs = b.shape();
  require(as.n == bs.n && as.h == bs.h && as.w == bs.w, "tensor-autodiff",
          "concat_channels spatial mismatch: " + as.str() + " vs " + bs.str());
  Tensor<T>& out = tape.make(Shape{as.n, as.c + bs.c, as.h, as.w});
  const std::size_t plane = as.plane();
  for (std::size_t n = 0; n < as.n; ++n) {
    std::copy_n(a.data() + n * as.c * plane, as.c * plane, out.data() + n * (as.c + bs.c) * plane);
    std::copy_n(b.data() + n * bs.c * plane, bs.c * plane, out.data() + (n * (as.c + bs.c) + as.c) * plane);
  }
  tape.record([&a, &b, &out] {
    if (!out.has_grad()) return;
    a.ensure_grad();
    b.ensure_grad();
    const Shape as = a.shape();
    const Shape bs = b.shape();
    const std::size_t plane = as.plane();
    for (std::size_t n = 0; n < as.n; ++n) {
      const T* g = out.grad_data() + n * (as.c + bs.c) * plane;
      for (std::size_t i = 0; i < as.c * plane; ++i) a.grad()[n * as.c * plane + i] += g[i];
      for (std::size_t i = 0; i < bs.c * plane; ++i) b.grad()[n * bs.c * plane + i] += g[as.c * plane + i];
    }
  });
  return out;
}

// Channels [begin, end) of `input`.
template <typename T>
Tensor<T>& slice_channels(Tape<T>& tape, Tensor<T>& input, std::size_t begin, std::size_t end) {
  const Shape is = input.shape();
  require(begin < end && end <= is.c, "tensor-autodiff", "slice_channels range out of bounds for " + is.str());
  const std::size_t cnt = end - begin;
  Tensor<T>& out = tape.make(Shape{is.n, cnt, is.h, is.w});
  const std::size_t plane = is.plane();
  for (std::size_t n = 0; n < is.n; ++n) {
    std::copy_n(input.data() + (n * is.c + begin) * plane, cnt * plane, out.data() + n * cnt * plane);
  }
  tape.record([&input, &out, begin, cnt] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    const Shape is = input.shape();
    const std::size_t plane = is.plane();
    for (std::size_t n = 0; n < is.n; ++n) {
      for (std::size_t i = 0; i < cnt * plane; ++i) {
        input.grad()[(n * is.c + begin) * plane + i] += out.grad()[n * cnt * plane + i];
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T>& sum(Tape<T>& tape, Tensor<T>& input) {
  Tensor<T>& out = tape.make(Shape{1, 1, 1, 1});
  T acc = T(0);
  for (T v : input.values()) acc += v;
  out.data()[0] = acc;
  tape.record([&input, &out] {
    if (!out.has_grad()) return;
    input.ensure_grad();
    const T g = out.grad()[0];
    for (auto& gi : input.grad()) gi += g;
  });
  return out;
}

// Σ coeff_i · term_i over scalar tensors.
template <typename T>
Tensor<T>& weighted_sum(Tape<T>& tape, std::vector<std::pair<Tensor<T>*, T>> terms) {
  Tensor<T>& out = tape.make(Shape{1, 1, 1, 1});
  T acc = T(0);
  for (const auto& [t, coeff] : terms) {
    require(t->numel() == 1, "tensor-autodiff", "weighted_sum terms must be scalars");
    acc += coeff * t->data()[0];
  }
  out.data()[0] = acc;
  tape.record([terms = std::move(terms), &out] {
    if (!out.has_grad()) return;
    for (const auto& [t, coeff] : terms) {
      t->ensure_grad();
      t->grad()[0] += coeff * out.grad()[0];
    }
  });
  return out;
}

}  // namespace ops
}  // namespace ganet

#endif  // GANET_AUTODIFF_HPP_
