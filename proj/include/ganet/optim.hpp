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
#ifndef GANET_OPTIM_HPP_
#define GANET_OPTIM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "ganet/error.hpp"
#include "ganet/params.hpp"

namespace ganet {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  AdamConfig config;
  std::vector<std::vector<T>> first_moment;
  std::vector<std::vector<T>> second_moment;
  std::uint64_t step = 0;

  explicit AdamState(const ParamSet<T>& params, AdamConfig cfg = {}) : config(cfg) {
    for (const auto& e : params.entries()) {
      first_moment.emplace_back(e.tensor.numel(), T(0));
      second_moment.emplace_back(e.tensor.numel(), T(0));
    }
  }
};

// Step-wise exponential decay: lr0 · rate^floor(iter / every).
inline double decayed_learning_rate(double initial_lr, double decay_rate, std::uint64_t decay_every,
                                    std::uint64_t iter) {
  require(decay_every > 0, "tensor-autodiff", "decay_every must be positive");
  return initial_lr * std::pow(decay_rate, static_cast<double>(iter / decay_every));
}

// Bias-corrected Adam update; gradients are zeroed afterwards.
template <typename T>
void adam_step(ParamSet<T>& params, AdamState<T>& state, double lr) {
  require(state.first_moment.size() == params.size(), "tensor-autodiff",
          "optimizer state does not match parameter set");
  for (const auto& e : params.entries()) {
    require(e.tensor.has_grad(), "tensor-autodiff", "parameter " + e.name + " has no gradient");
  }
  ++state.step;
  const double b1 = state.config.beta1;
  const double b2 = state.config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  std::size_t idx = 0;
  for (auto& e : params.entries()) {
    auto& m = state.first_moment[idx];
    auto& v = state.second_moment[idx];
    require(m.size() == e.tensor.numel(), "tensor-autodiff", "moment shape mismatch for " + e.name);
    auto vals = e.tensor.values();
    auto grad = e.tensor.grad();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double g = grad[i];
      m[i] = static_cast<T>(b1 * m[i] + (1.0 - b1) * g);
      v[i] = static_cast<T>(b2 * v[i] + (1.0 - b2) * g * g);
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      vals[i] = static_cast<T>(vals[i] - lr * mhat / (std::sqrt(vhat) + state.config.eps));
    }
    e.tensor.zero_grad();
    ++idx;
  }
}

}  // namespace ganet

#endif  // GANET_OPTIM_HPP_
