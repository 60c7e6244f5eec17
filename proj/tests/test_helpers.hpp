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
#ifndef GANET_TESTS_TEST_HELPERS_HPP_
#define GANET_TESTS_TEST_HELPERS_HPP_

#include <filesystem>
#include <string>

#include "ganet/ganet.hpp"

namespace ganet::testing {

inline Tensor<double> random_tensor(Shape s, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor<double> t(s);
  for (auto& v : t.values()) v = rng.uniform(lo, hi);
  return t;
}

// Random values bounded away from zero, for ops with a kink at the origin.
inline Tensor<double> away_from_zero(Shape s, Rng& rng) {
  Tensor<double> t(s);
  for (auto& v : t.values()) v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 1.0);
  return t;
}

// sum(t * R) for a fixed random R, so every output element gets a distinct
// upstream gradient.
inline Tensor<double>& project(Tape<double>& tape, Tensor<double>& t, std::uint64_t seed) {
  Rng rng(seed);
  Tensor<double>& r = tape.adopt(random_tensor(t.shape(), rng));
  return ops::sum(tape, ops::mul(tape, t, r));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ganet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ganet::testing

#endif  // GANET_TESTS_TEST_HELPERS_HPP_
