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

// Generates one synthetic scene, encodes its boxes into target maps and
// decodes them back through the postprocessing chain.

#include <cstdio>

#include "ganet/ganet.hpp"

int main() {
  const ganet::SceneSample scene = ganet::gen_scene(7, ganet::SceneConfig{});
  std::printf("scene %zux%zu with %zu objects\n", scene.image.width, scene.image.height, scene.boxes.size());

  const ganet::TargetMaps t = ganet::encode_targets(scene.boxes, scene.image.width, scene.image.height, ganet::kOutputStride);
  std::printf("positive cells: %zu\n", t.positives());

  ganet::PostprocessConfig post;
  post.mu = 0.5;
  const auto ranked = ganet::postprocess(ganet::maps_from_targets(t), scene.image.width, scene.image.height, post);
  for (const auto& d : ranked.detections) {
    std::printf("box (%.1f, %.1f, %.1f, %.1f) conf %.3f\n", d.box.x1, d.box.y1, d.box.x2, d.box.y2, d.confidence);
  }
  std::printf("count %zu\n", ranked.count);
  return 0;
}
