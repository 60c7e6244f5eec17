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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ganet/ganet.hpp"
#include "test_helpers.hpp"

namespace {

using namespace ganet;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("criterion %2d %-26s %s  %s\n", id, name, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RunConfig toy_config() { return parse_config(GANET_TOY_CONFIG); }

// ---------------------------------------------------------------------------
// 1. Gradient correctness

double op_grad_checks() {
  using testing::away_from_zero;
  using testing::project;
  using testing::random_tensor;
  Rng rng(101);
  double worst = 0.0;
  auto check = [&worst](const std::function<Tensor<double>&(Tape<double>&)>& f, std::vector<GradCheckTarget> t) {
    const auto r = grad_check(f, t, 1e-5, 1e-4);
    worst = std::max(worst, r.passed() ? r.max_rel_error() : INFINITY);
  };
  auto in = random_tensor({2, 3, 6, 6}, rng);
  auto w3 = random_tensor({2, 3, 3, 3}, rng);
  auto w1 = random_tensor({2, 3, 1, 1}, rng);
  auto b = random_tensor({1, 2, 1, 1}, rng);
  for (int s : {1, 2}) {
    check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::conv2d(t, in, w3, b, s, 1), 1); },
          {{"in", &in}, {"w", &w3}, {"b", &b}});
    check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::conv2d(t, in, w1, b, s, 0), 2); },
          {{"in", &in}, {"w", &w1}, {"b", &b}});
  }
  Tensor<double> pool_in(Shape{1, 2, 4, 4});
  for (std::size_t i = 0; i < pool_in.numel(); ++i) pool_in.values()[i] = 0.1 * static_cast<double>((i * 7) % 32);
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::maxpool2(t, pool_in), 3); }, {{"x", &pool_in}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::upsample2(t, in), 4); }, {{"x", &in}});
  auto nz = away_from_zero({2, 3, 3, 3}, rng);
  auto other = random_tensor({2, 3, 3, 3}, rng);
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::sigmoid(t, nz), 5); }, {{"x", &nz}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::relu(t, nz), 6); }, {{"x", &nz}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::exp(t, nz), 7); }, {{"x", &nz}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::scale(t, nz, 1.7), 8); }, {{"x", &nz}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::add(t, nz, other), 9); },
        {{"a", &nz}, {"b", &other}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::mul(t, nz, other), 10); },
        {{"a", &nz}, {"b", &other}});
  auto factors = random_tensor({2, 3, 1, 1}, rng);
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::channel_scale(t, other, factors), 11); },
        {{"x", &other}, {"f", &factors}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::global_avg_pool(t, other), 12); },
        {{"x", &other}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::concat_channels(t, nz, other), 13); },
        {{"a", &nz}, {"b", &other}});
  check([&](Tape<double>& t) -> Tensor<double>& { return project(t, ops::slice_channels(t, other, 1, 2), 14); },
        {{"x", &other}});
  check(
      [&](Tape<double>& t) -> Tensor<double>& {
        return ops::weighted_sum<double>(t, {{&project(t, nz, 15), 0.5}, {&ops::sum(t, other), -2.0}});
      },
      {{"a", &nz}, {"b", &other}});
  return worst;
}

struct FullNetCheck {
  double worst = 0.0;
  bool passed = false;
  std::size_t scalars = 0;
};

// Checked at unit loss weights and with the location head near object scale.
// Central differences at h = 1e-5 resolve about ulp(loss) / 2h, so the weak
// branches need gradients well above that floor to be measured at all. The
// point is also kept clear of relu and maxpool switches within +-h.
FullNetCheck full_net_grad_check() {
  NetConfig cfg;
  cfg.stem_channels = 2;
  cfg.channels = {2, 3, 3, 4};
  cfg.input_h = cfg.input_w = 32;
  cfg.seed = 4;
  Detector<double> net(cfg);
  Rng rng(8);
  for (auto& e : net.params().entries()) {
    if (e.name.ends_with(".bias") || e.name.starts_with("head.location")) {
      const double shift = e.name == "head.location.bias" ? 1.0 : 0.0;
      for (auto& v : e.tensor.values()) v = shift + rng.uniform(-0.2, 0.2);
    }
  }

  SceneConfig sc;
  sc.size = 32;
  sc.min_objects = 1;
  sc.max_objects = 2;
  sc.min_object_size = 8;
  sc.max_object_size = 14;
  const SceneSample scene = gen_scene(9, sc);
  Tensor<double> image(Shape{2, 1, 32, 32});
  write_input(scene.image, image, 0);
  write_input(gen_scene(6, SceneConfig{32, 0, 0, 8, 14}).image, image, 1);
  const std::vector<TargetMaps> targets{encode_targets(scene.boxes, 32, 32, kOutputStride),
                                        encode_targets({}, 32, 32, kOutputStride)};
  const std::vector<int> labels{1, -1};
  const LossWeights unit{1.0, 1.0, 1.0};

  auto build = [&](Tape<double>& tape) -> Tensor<double>& {
    const auto out = net.forward(tape, image);
    return *total_loss(tape, out, std::span<const TargetMaps>(targets), std::span<const int>(labels), unit).total;
  };
  std::vector<GradCheckTarget> params;
  FullNetCheck r;
  for (auto& e : net.params().entries()) {
    params.push_back({e.name, &e.tensor});
    r.scalars += e.tensor.numel();
  }
  const auto rep = grad_check(build, params, 1e-5, 1e-4);
  r.worst = rep.max_rel_error();
  r.passed = rep.passed();
  return r;
}

void criterion_gradients() {
  const auto t0 = Clock::now();
  const double ops_worst = op_grad_checks();
  const FullNetCheck net = full_net_grad_check();
  const double elapsed = seconds_since(t0);
  const bool ok = ops_worst < 1e-4 && net.passed && elapsed < 60.0;
  char buf[200];
  std::snprintf(buf, sizeof buf, "ops max rel err %.2e; full net (%zu params, 32x32) %.2e; %.1fs", ops_worst,
                net.scalars, net.worst, elapsed);
  report(1, "gradient-correctness", ok, buf);
}

// ---------------------------------------------------------------------------
// 2. Loss identities

void criterion_losses() {
  Rng rng(201);
  double worst_identity = 0.0, worst_scale = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double g[4], gs[4], cg[4], cgs[4];
    const double c = rng.uniform(0.05, 40.0);
    for (int k = 0; k < 4; ++k) {
      g[k] = rng.uniform(0.1, 30.0);
      gs[k] = rng.uniform(0.1, 30.0);
      cg[k] = c * g[k];
      cgs[k] = c * gs[k];
    }
    worst_identity = std::max(worst_identity, std::abs(iou_pixel_loss(g, g)));
    worst_scale = std::max(worst_scale, std::abs(iou_pixel_loss(g, gs) - iou_pixel_loss(cg, cgs)));
  }
  std::vector<double> bin(256);
  for (auto& v : bin) v = rng.uniform() < 0.3 ? 1.0 : 0.0;
  const double dice_self = dice_value(bin, bin);
  const double ba0 = std::abs(ba_loss_value(0.0, 1) - std::log(2.0));
  const double total = std::abs(combine_losses(1, 1, 1, 1, LossWeights{}) - 1.0135);
  const bool ok = worst_identity <= 1e-12 && worst_scale <= 1e-9 && dice_self <= 1e-5 && ba0 <= 1e-9 && total <= 1e-9;
  char buf[200];
  std::snprintf(buf, sizeof buf, "iou(G,G) %.1e; scale drift %.1e; dice(p=g) %.1e; |ba-ln2| %.1e; |total-1.0135| %.1e",
                worst_identity, worst_scale, dice_self, ba0, total);
  report(2, "loss-identities", ok, buf);
}

// ---------------------------------------------------------------------------
// 3. Encode / decode round trip

void criterion_round_trip() {
  const auto t0 = Clock::now();
  Rng rng(301);
  PostprocessConfig post;
  post.mu = 0.5;
  std::size_t boxes = 0, recovered = 0;
  double worst = 1.0;
  while (boxes < 500) {
    // Up to five disjoint boxes per canvas.
    std::vector<Box> canvas;
    for (int tries = 0; tries < 50 && canvas.size() < 5; ++tries) {
      const auto w = static_cast<double>(rng.uniform_int(4, 30));
      const auto h = static_cast<double>(rng.uniform_int(4, 30));
      const auto x = static_cast<double>(rng.uniform_int(0, 64 - static_cast<std::int64_t>(w)));
      const auto y = static_cast<double>(rng.uniform_int(0, 64 - static_cast<std::int64_t>(h)));
      const Box b{x, y, x + w, y + h};
      if (std::all_of(canvas.begin(), canvas.end(), [&b](const Box& o) { return intersection_area(o, b) == 0.0; })) {
        canvas.push_back(b);
      }
    }
    canvas.resize(std::min<std::size_t>(canvas.size(), 500 - boxes));
    const auto t = encode_targets(canvas, 64, 64, kOutputStride);
    const auto r = postprocess(maps_from_targets(t), 64, 64, post);
    for (const Box& b : canvas) {
      double best = 0.0;
      for (const auto& d : r.detections) best = std::max(best, iou(d.box, b));
      worst = std::min(worst, best);
      recovered += best >= 0.9;
      ++boxes;
    }
  }
  const double elapsed = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu boxes at IoU >= 0.9 (min %.3f); %.2fs", recovered, boxes, worst, elapsed);
  report(3, "encode-decode-round-trip", recovered == boxes && elapsed < 30.0, buf);
}

// ---------------------------------------------------------------------------
// 4. NMS and matching oracles

std::vector<Detection> suppress_reference(std::vector<Detection> dets, double thr) {
  std::vector<Detection> kept;
  while (!dets.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dets.size(); ++i) {
      const auto& a = dets[i];
      const auto& b = dets[best];
      if (a.confidence > b.confidence ||
          (a.confidence == b.confidence &&
           (a.source_y < b.source_y || (a.source_y == b.source_y && a.source_x < b.source_x)))) {
        best = i;
      }
    }
    const Detection top = dets[best];
    kept.push_back(top);
    std::vector<Detection> rest;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (i != best && iou(dets[i].box, top.box) < thr) rest.push_back(dets[i]);
    }
    dets = std::move(rest);
  }
  return kept;
}

void criterion_nms_matching() {
  Rng rng(401);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Detection> dets;
    const std::size_t n = rng.uniform_int(0, 20);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(0, 40), y = rng.uniform(0, 40);
      dets.push_back({{x, y, x + rng.uniform(2, 20), y + rng.uniform(2, 20)},
                      0.05 * static_cast<double>(rng.uniform_int(1, 19)), i % 4, i / 4});
    }
    const double thr = rng.uniform(0.05, 0.7);
    const auto a = nms(dets, thr);
    const auto b = suppress_reference(dets, thr);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].source_x == b[i].source_x && a[i].source_y == b[i].source_y;
    }
    mismatches += !same;
  }
  const double ap = average_precision({true, false, true}, 2);
  const bool hand = std::abs(ap - 0.8333) <= 1e-4 && std::abs(ap - 5.0 / 6.0) <= 1e-6 &&
                    average_precision({true, true}, 2) == 1.0 && average_precision({false, false}, 2) == 0.0 &&
                    average_precision({}, 0) == 1.0 && average_precision({false}, 0) == 0.0;
  const Box g{0, 0, 10, 10};
  const bool match = match_detections({{g, 0.9, 0, 0}, {g, 0.8, 0, 0}}, {g}, 0.7) == std::vector<bool>{true, false};
  char buf[160];
  std::snprintf(buf, sizeof buf, "nms mismatches %zu/1000; AP(TP,FP,TP)/2 = %.6f; matching %s", mismatches, ap,
                match ? "ok" : "wrong");
  report(4, "nms-matching-oracles", mismatches == 0 && hand && match, buf);
}

// ---------------------------------------------------------------------------
// 5. Corner-vote properties

void criterion_corner_vote(Detector<float>& model) {
  PredictionMaps m;
  m.h = m.w = 16;
  m.stride = 2;
  m.score.assign(256, 0.0);
  m.location.assign(4 * 256, 1.0);
  m.corners.resize(4 * 256);
  const double tau[4] = {0.4, 0.5, 0.2, 0.35};
  for (std::size_t s = 0; s < 4; ++s) std::fill_n(m.corners.begin() + s * 256, 256, tau[s]);
  const int n = reliable_corners(Detection{{4, 4, 22, 22}, 0.9, 0, 0}, m, 0.3);

  const PostprocessConfig post;
  const auto images = gen_corpus(501, 100, SceneConfig{});
  std::size_t identity_failures = 0, monotone_failures = 0, total0 = 0, total4 = 0;
  auto key = [](const Detection& d) { return std::make_pair(d.source_y, d.source_x); };
  for (const auto& s : images) {
    const PredictionMaps pm = predict(model, s.image);
    const auto kept = nms(decode_candidates(pm, 64, 64, post.mu), post.nms_iou);
    std::set<std::pair<std::size_t, std::size_t>> prev;
    for (int kappa = 0; kappa <= 4; ++kappa) {
      const auto voted = corner_vote_filter(kept, pm, post.epsilon, kappa);
      std::set<std::pair<std::size_t, std::size_t>> cur;
      for (const auto& d : voted) cur.insert(key(d));
      if (kappa == 0) {
        identity_failures += voted.size() != kept.size();
        total0 += voted.size();
      } else {
        monotone_failures += !std::includes(prev.begin(), prev.end(), cur.begin(), cur.end());
      }
      if (kappa == 4) total4 += voted.size();
      prev = std::move(cur);
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "tau example N = %d; kappa=0 identity failures %zu; monotonicity failures %zu (%zu -> %zu boxes)",
                n, identity_failures, monotone_failures, total0, total4);
  report(5, "corner-vote-properties", n == 3 && identity_failures == 0 && monotone_failures == 0, buf);
}

// ---------------------------------------------------------------------------
// 6. Augmentation

void criterion_augmentation() {
  Rng rng(601);
  Image img(31, 17, 3);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  bool identity = true;
  for (const NoiseMap& m : {brightness_map(31, 17, NoiseKind::kWhite), brightness_map(31, 17, NoiseKind::kBlack),
                            perlin_map(31, 17, 3)}) {
    identity = identity && blend(img, m, BlendParams{1.0, 0.0}) == img;
  }
  auto one = [](std::uint8_t v, NoiseKind k, double a, double g) {
    return blend(Image(1, 1, 1, v), brightness_map(1, 1, k), BlendParams{a, g}).pixels[0];
  };
  const bool clamp = one(250, NoiseKind::kWhite, 0.5, 20) == 255 && one(5, NoiseKind::kBlack, 0.5, -20) == 0 &&
                     one(255, NoiseKind::kWhite, 0.0, 0) == 255 && one(0, NoiseKind::kBlack, 0.0, 0) == 0 &&
                     one(100, NoiseKind::kBlack, 0.5, 10) == 60;

  PerlinNoise noise(rng.next_u64());
  double lattice = 0.0;
  for (int i = 0; i < 100; ++i) {
    lattice = std::max(lattice, std::abs(noise.raw(static_cast<double>(rng.uniform_int(-1000, 1000)),
                                                   static_cast<double>(rng.uniform_int(-1000, 1000)))));
  }

  const auto dir_a = testing::scratch_dir("accept_corpus_a");
  const auto dir_b = testing::scratch_dir("accept_corpus_b");
  write_dataset(dir_a, gen_corpus(602, 200, SceneConfig{}));
  write_dataset(dir_b, gen_corpus(602, 200, SceneConfig{}));
  bool corpus = true;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const auto other = dir_b / entry.path().filename();
    corpus = corpus && fs::exists(other) && read_file(entry.path(), "acceptance") == read_file(other, "acceptance");
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "blend identity %s; clamp %s; max |perlin| at lattice %.1e; corpus regeneration %s",
                identity ? "exact" : "differs", clamp ? "exact" : "wrong", lattice, corpus ? "identical" : "differs");
  report(6, "augmentation", identity && clamp && lattice <= 1e-12 && corpus, buf);
}

// ---------------------------------------------------------------------------
// 7. Metric inequalities

void criterion_metrics() {
  Rng rng(701);
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::pair<long, long>> pairs(rng.uniform_int(1, 30));
    for (auto& [g, p] : pairs) {
      g = static_cast<long>(rng.uniform_int(0, 50));
      p = static_cast<long>(rng.uniform_int(0, 50));
    }
    const auto e = counting_errors(pairs);
    violations += e.rmse < e.mae;
  }
  // AP under a strictly increasing confidence map.
  std::size_t ap_changes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ImageEval> images(5);
    for (auto& im : images) {
      for (std::uint64_t k = 0, n = rng.uniform_int(0, 6); k < n; ++k) {
        const double x = rng.uniform(0, 50), y = rng.uniform(0, 50);
        im.ground_truth.push_back({x, y, x + rng.uniform(4, 12), y + rng.uniform(4, 12)});
      }
      for (std::uint64_t k = 0, n = rng.uniform_int(0, 8); k < n; ++k) {
        const double x = rng.uniform(0, 50), y = rng.uniform(0, 50);
        im.detections.push_back({{x, y, x + rng.uniform(4, 12), y + rng.uniform(4, 12)}, rng.uniform(), 0, k});
      }
    }
    auto rescaled = images;
    for (auto& im : rescaled)
      for (auto& d : im.detections) d.confidence = 0.1 + 0.5 * std::pow(d.confidence, 3.0);
    for (double thr : {0.3, 0.5}) ap_changes += corpus_ap(images, thr) != corpus_ap(rescaled, thr);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "rmse < mae in %zu/10000 vectors; AP changed under rescaling in %zu/400 cases",
                violations, ap_changes);
  report(7, "metric-inequalities", violations == 0 && ap_changes == 0, buf);
}

// ---------------------------------------------------------------------------
// 8 & 9. Toy training runs

struct ToyRun {
  EvalResult eval;
  EvalResult eval_kappa4;
  double ba_accuracy = -1.0;
  double seconds = 0.0;
  double early_loss = 0.0;
  double late_loss = 0.0;
  std::uint64_t iterations = 0;
};

constexpr std::uint64_t kTrainSeed = 11;
constexpr std::uint64_t kHeldOutSeed = 12;

EvalResult evaluate_model(Detector<float>& model, const std::vector<SceneSample>& held, const RunConfig& cfg,
                          const PostprocessConfig& post) {
  std::vector<ImageEval> images;
  for (const auto& s : held) images.push_back({detect_image(model, s.image, post).detections, s.boxes});
  return evaluate(images, cfg.eval_ious, post.count_threshold);
}

ToyRun toy_run(RunConfig cfg, const fs::path& dir, Detector<float>* keep = nullptr) {
  const auto t0 = Clock::now();
  cfg.seed = kTrainSeed;
  const auto train = gen_corpus(kTrainSeed, 200, cfg.scene);
  const auto held = gen_corpus(kHeldOutSeed, 50, cfg.scene);
  const TrainResult tr = train_loop(cfg, train, dir);
  Detector<float> model = load_model(cfg, tr.checkpoint);

  ToyRun r;
  r.iterations = tr.log.size();
  r.eval = evaluate_model(model, held, cfg, cfg.post);
  PostprocessConfig strict = cfg.post;
  strict.kappa = 4;
  r.eval_kappa4 = evaluate_model(model, held, cfg, strict);
  if (cfg.model.fusion == Fusion::kBackgroundAttention) {
    Rng rng(kHeldOutSeed);
    std::size_t correct = 0, total = 0;
    for (const auto& s : held) {
      if (s.boxes.empty()) continue;
      const CropResult c = gen_crop_pair(s.image, s.boxes, rng, cfg.augment);
      correct += ba_score(model, c.positive.image) > 0.0;
      correct += ba_score(model, c.negative.image) <= 0.0;
      total += 2;
    }
    r.ba_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  }
  const std::size_t window = std::min<std::size_t>(50, tr.log.size());
  for (std::size_t i = 0; i < window; ++i) {
    r.early_loss += tr.log[i].loss / static_cast<double>(window);
    r.late_loss += tr.log[tr.log.size() - window + i].loss / static_cast<double>(window);
  }
  r.seconds = seconds_since(t0);
  if (keep != nullptr) *keep = std::move(model);
  return r;
}

void criterion_toy(const ToyRun& ba) {
  const double ap = ba.eval.ap_at(0.5);
  const bool ok = ap >= 0.6 && ba.eval.mae <= 2.0 && ba.ba_accuracy >= 0.9 && ba.seconds <= 900.0 &&
                  ba.iterations <= 5000;
  char buf[200];
  std::snprintf(buf, sizeof buf, "AP@0.5 %.3f, AP@0.7 %.3f, MAE %.3f, RMSE %.3f, BA acc %.3f; %llu iters, %.0fs", ap,
                ba.eval.ap_at(0.7), ba.eval.mae, ba.eval.rmse, ba.ba_accuracy,
                static_cast<unsigned long long>(ba.iterations), ba.seconds);
  report(8, "end-to-end-toy-run", ok, buf);
  const double drop = 1.0 - ba.late_loss / ba.early_loss;
  std::printf("   note: training loss mean of first 50 iters %.4f, last 50 iters %.4f (%.0f%% lower)\n", ba.early_loss,
              ba.late_loss, 100.0 * drop);
}

void criterion_ablation(const ToyRun& ba, const ToyRun& fpn) {
  const double ba_ap = ba.eval.ap_at(0.5), fpn_ap = fpn.eval.ap_at(0.5);
  const double k1 = ba.eval.ap_at(0.5), k4 = ba.eval_kappa4.ap_at(0.5);
  char buf[200];
  std::snprintf(buf, sizeof buf, "AP@0.5 ba %.3f vs fpn %.3f; kappa=1 %.3f vs kappa=4 %.3f", ba_ap, fpn_ap, k1, k4);
  report(9, "ablation-direction", ba_ap >= fpn_ap - 0.02 && k1 >= k4, buf);
}

// ---------------------------------------------------------------------------
// 10. Determinism of the full pipeline

std::string pipeline_report(const fs::path& root) {
  RunConfig cfg = toy_config();
  cfg.seed = 1001;
  cfg.scene_count = 12;
  cfg.schedule.max_iters = 25;
  cfg.schedule.checkpoint_every = 10;
  cfg.post.mu = 0.3;
  run_synth(cfg, root / "data");
  run_augment(cfg, root / "data", root / "crops");
  const TrainResult tr = run_train(cfg, root / "data", root / "model");
  run_detect(cfg, tr.checkpoint, root / "data", root / "det");
  run_eval(cfg, root / "data", root / "det", root / "report.txt");
  return read_file(root / "report.txt", "acceptance") + read_file(root / "model" / "train_log.txt", "acceptance") +
         read_file(root / "det" / "counts.txt", "acceptance");
}

void criterion_determinism() {
  const std::string a = pipeline_report(testing::scratch_dir("accept_pipeline_a"));
  const std::string b = pipeline_report(testing::scratch_dir("accept_pipeline_b"));
  report(10, "pipeline-determinism", a == b && !a.empty(),
         a == b ? "synth -> augment -> train -> detect -> eval twice: reports, logs and counts byte-identical"
                : "runs differ");
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  try {
    criterion_gradients();
    criterion_losses();
    criterion_round_trip();
    criterion_nms_matching();
    criterion_augmentation();
    criterion_metrics();

    const RunConfig toy = toy_config();
    Detector<float> ba_model(Trainer::model_config(toy));
    const ToyRun ba = toy_run(toy, testing::scratch_dir("accept_toy_ba"), &ba_model);
    criterion_corner_vote(ba_model);
    criterion_toy(ba);
    RunConfig fpn_cfg = toy;
    fpn_cfg.model.fusion = Fusion::kFpn;
    const ToyRun fpn = toy_run(fpn_cfg, testing::scratch_dir("accept_toy_fpn"));
    criterion_ablation(ba, fpn);
    criterion_determinism();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%d criteria failed; total %.0fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
