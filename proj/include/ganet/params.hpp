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
#ifndef GANET_PARAMS_HPP_
#define GANET_PARAMS_HPP_

#include <cstddef>
#include <deque>
#include <string>

#include "ganet/error.hpp"
#include "ganet/tensor.hpp"

namespace ganet {

template <typename T>
struct NamedTensor {
  std::string name;
  Tensor<T> tensor;
};

// Ordered, named collection of learnable tensors. Insertion order is the
// canonical order for checkpoints and optimizer state; references returned by
// add() stay valid for the lifetime of the set.
template <typename T>
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(const ParamSet&) = delete;
  ParamSet& operator=(const ParamSet&) = delete;
  ParamSet(ParamSet&&) = default;
  ParamSet& operator=(ParamSet&&) = default;

  Tensor<T>& add(const std::string& name, Shape shape) {
    require(find(name) == nullptr, "detector-net", "duplicate parameter name " + name);
    return entries_.emplace_back(NamedTensor<T>{name, Tensor<T>(shape)}).tensor;
  }

  Tensor<T>* find(const std::string& name) {
    for (auto& e : entries_) {
      if (e.name == name) return &e.tensor;
    }
    return nullptr;
  }

  Tensor<T>& get(const std::string& name) {
    Tensor<T>* t = find(name);
    require(t != nullptr, "detector-net", "unknown parameter " + name);
    return *t;
  }

  std::deque<NamedTensor<T>>& entries() { return entries_; }
  const std::deque<NamedTensor<T>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t scalar_count() const {
    std::size_t total = 0;
    for (const auto& e : entries_) total += e.tensor.numel();
    return total;
  }

  void zero_grad() {
    for (auto& e : entries_) e.tensor.zero_grad();
  }

 private:
  std::deque<NamedTensor<T>> entries_;
};

}  // namespace ganet

#endif  // GANET_PARAMS_HPP_
