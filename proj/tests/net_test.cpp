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

#include <gtest/gtest.h>

#include <set>

#include "ganet/ganet.hpp"
#include "test_helpers.hpp"

namespace ganet {
namespace {

using testing::random_tensor;

NetConfig small_config(Fusion fusion) {
  NetConfig cfg;
  cfg.fusion = fusion;
  cfg.seed = 4;
  return cfg;
}

TEST(Backbone, SideOutputStrides) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  Rng rng(1);
  auto img = random_tensor({1, 1, 64, 64}, rng);
  Tape<double> tape(false);
  const auto side = net.forward_backbone(tape, img);
  const std::size_t sizes[] = {32, 16, 8, 4};
  const std::size_t chans[] = {8, 16, 32, 64};
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_EQ(side[l]->shape(), (Shape{1, chans[l], sizes[l], sizes[l]}));
  }
}

TEST(Backbone, ZeroImageZeroBiasGivesZeroFeatures) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  Tensor<double> img(Shape{1, 1, 32, 32});
  Tape<double> tape(false);
  for (const auto* s : net.forward_backbone(tape, img)) {
    for (double v : s->values()) ASSERT_EQ(v, 0.0);
  }
}

TEST(Backbone, RejectsIndivisibleSize) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  Tensor<double> img(Shape{1, 1, 40, 36});
  Tape<double> tape(false);
  EXPECT_THROW(net.forward_backbone(tape, img), Error);
}

TEST(Backbone, ParameterCountMatchesClosedForm) {
  NetConfig cfg;
  // 1->8->8, 8->16->16, 16->32->32, 32->64->64, all 3x3 with bias.
  const std::size_t hand = (9 * 1 * 8 + 8) + (9 * 8 * 8 + 8) + (9 * 8 * 16 + 16) + (9 * 16 * 16 + 16) +
                           (9 * 16 * 32 + 32) + (9 * 32 * 32 + 32) + (9 * 32 * 64 + 64) + (9 * 64 * 64 + 64);
  EXPECT_EQ(backbone_param_count(cfg), hand);
  Detector<float> net(cfg);
  std::size_t counted = 0;
  for (const auto& e : net.params().entries()) {
    if (e.name.starts_with("backbone.")) counted += e.tensor.numel();
  }
  EXPECT_EQ(counted, hand);
}

TEST(Forward, OutputShapesAndRanges) {
  for (Fusion f : {Fusion::kBackgroundAttention, Fusion::kFpn}) {
    Detector<double> net(small_config(f));
    Rng rng(2);
    auto img = random_tensor({2, 1, 64, 64}, rng, -2.0, 2.0);
    Tape<double> tape(false);
    const auto out = net.forward(tape, img);
    EXPECT_EQ(out.score->shape(), (Shape{2, 1, 32, 32}));
    EXPECT_EQ(out.location->shape(), (Shape{2, 4, 32, 32}));
    EXPECT_EQ(out.corners->shape(), (Shape{2, 4, 32, 32}));
    EXPECT_EQ(out.ba_logits.size(), f == Fusion::kFpn ? 0u : 3u);
    for (const auto* l : out.ba_logits) EXPECT_EQ(l->shape(), (Shape{2, 1, 1, 1}));
    for (double v : out.score->values()) ASSERT_TRUE(v > 0.0 && v < 1.0);
    for (double v : out.corners->values()) ASSERT_TRUE(v > 0.0 && v < 1.0);
    for (double v : out.location->values()) ASSERT_GT(v, 0.0);
  }
}

TEST(Forward, Deterministic) {
  Detector<float> a(small_config(Fusion::kBackgroundAttention));
  Detector<float> b(small_config(Fusion::kBackgroundAttention));
  Rng rng(3);
  Tensor<float> img = tensor_cast<float>(random_tensor({1, 1, 32, 32}, rng));
  Tape<float> ta(false), tb(false);
  const auto oa = a.forward(ta, img);
  const auto ob = b.forward(tb, img);
  for (std::size_t i = 0; i < oa.location->numel(); ++i) ASSERT_EQ(oa.location->values()[i], ob.location->values()[i]);
}

TEST(Forward, CheckpointReproducesOutputs) {
  Detector<float> a(small_config(Fusion::kBackgroundAttention));
  NetConfig other = small_config(Fusion::kBackgroundAttention);
  other.seed = 99;
  Detector<float> b(other);
  assign_checkpoint(b.params(), decode_checkpoint(encode_checkpoint(a.params())));
  Rng rng(4);
  Tensor<float> img = tensor_cast<float>(random_tensor({1, 1, 32, 32}, rng));
  Tape<float> ta(false), tb(false);
  const auto oa = a.forward(ta, img);
  const auto ob = b.forward(tb, img);
  for (std::size_t i = 0; i < oa.score->numel(); ++i) ASSERT_EQ(oa.score->values()[i], ob.score->values()[i]);
}

TEST(Forward, FusionModeChangesParameterNames) {
  Detector<float> ba(small_config(Fusion::kBackgroundAttention));
  Detector<float> fpn(small_config(Fusion::kFpn));
  std::set<std::string> fpn_names;
  for (const auto& e : fpn.params().entries()) fpn_names.insert(e.name);
  EXPECT_TRUE(fpn_names.count("fpn1.lateral.weight"));
  EXPECT_TRUE(fpn_names.count("fpn3.smooth.bias"));
  for (const auto& n : fpn_names) EXPECT_FALSE(n.starts_with("ba") && !n.starts_with("backbone."));
  std::set<std::string> ba_names;
  for (const auto& e : ba.params().entries()) ba_names.insert(e.name);
  EXPECT_TRUE(ba_names.count("ba2.gate1.weight"));
  EXPECT_TRUE(ba_names.count("ba1.cls.bias"));
  for (const auto& n : ba_names) EXPECT_FALSE(n.starts_with("fpn"));
}

void set_identity(Tensor<double>& w) {
  w.fill(0.0);
  const Shape s = w.shape();
  for (std::size_t c = 0; c < s.n; ++c) w.at(c, c, s.h / 2, s.w / 2) = 1.0;
}

TEST(BaFuse, ReducesToReferenceGraphWithOpenGates) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  auto& p = net.params();
  p.get("ba2.gate2.weight").fill(0.0);
  p.get("ba2.gate2.bias").fill(60.0);
  set_identity(p.get("ba2.fuse1.weight"));
  set_identity(p.get("ba2.fuse3.weight"));
  p.get("ba2.fuse1.bias").fill(0.0);
  p.get("ba2.fuse3.bias").fill(0.0);
  Rng rng(5);
  for (auto& v : p.get("ba2.up.bias").values()) v = rng.uniform(-1, 1);

  auto s = random_tensor({1, 16, 8, 8}, rng);
  auto r_next = random_tensor({1, 32, 4, 4}, rng);
  Tape<double> tape(false);
  const auto res = net.ba_fuse(tape, s, r_next, 2);

  Tape<double> ref_tape(false);
  auto& rw = ops::conv2d(ref_tape, ops::upsample2(ref_tape, r_next), p.get("ba2.up.weight"), p.get("ba2.up.bias"), 1, 1);
  auto& ref = ops::add(ref_tape, s, rw);
  ASSERT_EQ(res.fused->shape(), ref.shape());
  for (std::size_t i = 0; i < ref.numel(); ++i) ASSERT_NEAR(res.fused->values()[i], ref.values()[i], 1e-12);
  EXPECT_EQ(res.logit->shape(), (Shape{1, 1, 1, 1}));
}

TEST(BaFuse, ZeroLateralInputLeavesOnlyDeepPath) {
  Detector<double> a(small_config(Fusion::kBackgroundAttention));
  Rng rng(6);
  Tensor<double> s(Shape{1, 16, 8, 8});
  auto r_next = random_tensor({1, 32, 4, 4}, rng);
  Tape<double> t1(false), t2(false);
  const auto r1 = a.ba_fuse(t1, s, r_next, 2);
  // Rescaling the gates cannot matter when s = 0.
  for (auto& v : a.params().get("ba2.gate2.bias").values()) v += 3.0;
  const auto r2 = a.ba_fuse(t2, s, r_next, 2);
  for (std::size_t i = 0; i < r1.fused->numel(); ++i) ASSERT_EQ(r1.fused->values()[i], r2.fused->values()[i]);
}

TEST(BaFuse, GatesCloseWhenPreActivationsDiverge) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  auto& p = net.params();
  p.get("ba2.gate2.weight").fill(0.0);
  p.get("ba2.gate2.bias").fill(-800.0);
  Rng rng(7);
  auto s = random_tensor({1, 16, 8, 8}, rng);
  auto r_next = random_tensor({1, 32, 4, 4}, rng);
  Tensor<double> zero_s(s.shape());
  Tape<double> t1(false), t2(false);
  const auto gated = net.ba_fuse(t1, s, r_next, 2);
  const auto blank = net.ba_fuse(t2, zero_s, r_next, 2);
  for (std::size_t i = 0; i < gated.fused->numel(); ++i) ASSERT_EQ(gated.fused->values()[i], blank.fused->values()[i]);
}

TEST(BaFuse, RejectsStrideMismatch) {
  Detector<double> net(small_config(Fusion::kBackgroundAttention));
  Tensor<double> s(Shape{1, 16, 8, 8}), r_next(Shape{1, 32, 8, 8});
  Tape<double> tape(false);
  EXPECT_THROW(net.ba_fuse(tape, s, r_next, 2), Error);
  EXPECT_THROW(net.fpn_fuse(tape, s, r_next, 2), Error);
}

TEST(FpnFuse, ZeroLateralIsConvOfUpsample) {
  Detector<double> net(small_config(Fusion::kFpn));
  auto& p = net.params();
  Rng rng(8);
  for (auto& v : p.get("fpn2.lateral.bias").values()) v = 0.0;
  Tensor<double> s(Shape{1, 16, 8, 8});
  auto r_next = random_tensor({1, 32, 4, 4}, rng);
  Tape<double> tape(false);
  auto& r = net.fpn_fuse(tape, s, r_next, 2);
  auto& ref = ops::conv2d(tape, ops::upsample2(tape, r_next), p.get("fpn2.smooth.weight"), p.get("fpn2.smooth.bias"), 1, 1);
  for (std::size_t i = 0; i < ref.numel(); ++i) ASSERT_NEAR(r.values()[i], ref.values()[i], 1e-12);
}

TEST(Fusion, ParseNames) {
  EXPECT_EQ(parse_fusion("ba"), Fusion::kBackgroundAttention);
  EXPECT_EQ(parse_fusion("fpn"), Fusion::kFpn);
  EXPECT_THROW(parse_fusion("concat"), Error);
}

}  // namespace
}  // namespace ganet
