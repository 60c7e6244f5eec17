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
#ifndef GANET_GRAD_CHECK_HPP_
#define GANET_GRAD_CHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ganet/autodiff.hpp"

namespace ganet {

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  bool finite = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double tolerance = 0.0;

  double max_rel_error() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.max_rel_error);
    return m;
  }
  bool passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [this](const GradCheckEntry& e) { return e.finite && e.max_rel_error < tolerance; });
  }
};

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

// Compares reverse-mode gradients of a scalar graph against central finite
// differences. `build` must construct the loss on the given tape from the
// listed tensors and be deterministic.
struct GradCheckTarget {
  std::string name;
  Tensor<double>* tensor;
};

inline GradCheckReport grad_check(const std::function<Tensor<double>&(Tape<double>&)>& build,
                                  const std::vector<GradCheckTarget>& targets, double h, double tol) {
  GradCheckReport report;
  report.tolerance = tol;
  for (const auto& t : targets) t.tensor->clear_grad();

  Tape<double> tape;
  Tensor<double>& loss = build(tape);
  const bool loss_finite = std::isfinite(loss.item());
  if (loss_finite) tape.backward(loss);

  auto eval = [&build] {
    Tape<double> probe(false);
    return build(probe).item();
  };

  for (const auto& t : targets) {
    GradCheckEntry entry{t.name, 0.0, loss_finite};
    if (!loss_finite) {
      entry.max_rel_error = INFINITY;
      report.entries.push_back(entry);
      continue;
    }
    auto vals = t.tensor->values();
    const bool has = t.tensor->has_grad();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double saved = vals[i];
      vals[i] = saved + h;
      const double up = eval();
      vals[i] = saved - h;
      const double down = eval();
      vals[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        entry.finite = false;
        entry.max_rel_error = INFINITY;
        break;
      }
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = has ? t.tensor->grad()[i] : 0.0;
      entry.max_rel_error = std::max(entry.max_rel_error, relative_error(analytic, numeric));
    }
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace ganet

#endif  // GANET_GRAD_CHECK_HPP_
