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

// Builds the mini detector, runs one forward pass with loss and a single
// Adam step on a synthetic scene.

#include <cstdio>

#include "ganet/ganet.hpp"

int main() {
  ganet::NetConfig cfg;
  cfg.seed = 3;
  ganet::Detector<float> net(cfg);
  std::printf("backbone parameters: %zu, total: %zu\n", ganet::backbone_param_count(cfg), net.params().scalar_count());

  const ganet::SceneSample scene = ganet::gen_scene(11, ganet::SceneConfig{});
  ganet::Tape<float> tape;
  ganet::Tensor<float>& input = tape.make({1, 1, 64, 64});
  ganet::write_input(scene.image, input, 0);

  const ganet::NetOutputs<float> out = net.forward(tape, input);
  const std::vector<ganet::TargetMaps> targets{
      ganet::encode_targets(scene.boxes, 64, 64, ganet::kOutputStride)};
  const std::vector<int> labels{1};
  const ganet::LossTerms<float> loss = ganet::total_loss(tape, out, targets, labels, ganet::LossWeights{});
  std::printf("loss %.5f (loc %.5f, score %.5f, fa %.5f, ba %.5f)\n", loss.total->item(), loss.loc->item(),
              loss.score->item(), loss.foreground->item(), loss.background->item());

  tape.backward(*loss.total);
  ganet::AdamState<float> adam(net.params());
  ganet::adam_step(net.params(), adam, 1e-3);
  std::printf("one Adam step applied\n");
  return 0;
}
