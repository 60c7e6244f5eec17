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
#ifndef GANET_ERROR_HPP_
#define GANET_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ganet {

// Every failure surfaced by the library carries the name of the module that
// raised it, so the CLI can print `ERROR <module>: <message>`.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

[[noreturn]] inline void fail(const std::string& module, const std::string& message) {
  throw Error(module, message);
}

inline void require(bool cond, const std::string& module, const std::string& message) {
  if (!cond) fail(module, message);
}

}  // namespace ganet

#endif  // GANET_ERROR_HPP_
