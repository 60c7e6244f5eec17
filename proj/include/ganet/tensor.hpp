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
#ifndef GANET_TENSOR_HPP_
#define GANET_TENSOR_HPP_

#include <algorithm>
#include <cstddef>
#include <new>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ganet/error.hpp"

namespace ganet {

struct Shape {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t numel() const { return n * c * h * w; }
  std::size_t plane() const { return h * w; }

  friend bool operator==(const Shape&, const Shape&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "(" << n << "," << c << "," << h << "," << w << ")";
    return os.str();
  }
};

// Storage on 64-byte boundaries. Vectorized kernels peel differently
// depending on pointer alignment, so a fixed alignment keeps results
// bit-identical from run to run.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), kAlignment)); }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<U>&) noexcept {
    return true;
  }
};

template <typename T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

// Dense NCHW array with a value plane and an optional gradient plane of the
// same length.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0)) : shape_(shape), values_(shape.numel(), fill) {}
  Tensor(Shape shape, const std::vector<T>& values) : shape_(shape), values_(values.begin(), values.end()) {
    require(values_.size() == shape_.numel(), "tensor",
            "value count " + std::to_string(values_.size()) + " does not match shape " + shape_.str());
  }

  static Tensor scalar(T v) { return Tensor(Shape{1, 1, 1, 1}, v); }

  const Shape& shape() const { return shape_; }
  std::size_t numel() const { return values_.size(); }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  std::size_t index(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const {
    return ((n * shape_.c + c) * shape_.h + y) * shape_.w + x;
  }
  T& at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) { return values_[index(n, c, y, x)]; }
  T at(std::size_t n, std::size_t c, std::size_t y, std::size_t x) const { return values_[index(n, c, y, x)]; }

  T item() const {
    require(values_.size() == 1, "tensor", "item() on non-scalar tensor " + shape_.str());
    return values_[0];
  }

  bool has_grad() const { return !grad_.empty(); }
  std::span<T> grad() { return grad_; }
  std::span<const T> grad() const { return grad_; }
  T* grad_data() { return grad_.data(); }

  // Allocates a zeroed gradient plane if none exists; existing gradients are kept.
  void ensure_grad() {
    if (grad_.size() != values_.size()) grad_.assign(values_.size(), T(0));
  }
  void zero_grad() { std::fill(grad_.begin(), grad_.end(), T(0)); }
  void clear_grad() { grad_.clear(); }

  void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

 private:
  Shape shape_{};
  AlignedVector<T> values_;
  AlignedVector<T> grad_;
};

template <typename To, typename From>
Tensor<To> tensor_cast(const Tensor<From>& src) {
  std::vector<To> out(src.numel());
  std::transform(src.values().begin(), src.values().end(), out.begin(),
                 [](From v) { return static_cast<To>(v); });
  return Tensor<To>(src.shape(), std::move(out));
}

}  // namespace ganet

#endif  // GANET_TENSOR_HPP_
