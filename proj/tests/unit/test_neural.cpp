// Copyright 2026 The Declip Lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support/gradcheck.hpp"
#include "support/signals.hpp"

#include "declip/error.hpp"
#include "declip/neural/adam.hpp"
#include "declip/neural/checkpoint.hpp"
#include "declip/neural/layers.hpp"
#include "declip/neural/loss.hpp"
#include "declip/neural/trainer.hpp"
#include "declip/neural/unet.hpp"

using namespace declip;
using namespace declip::nn;
using testing::random_tensor;

namespace {

// Six nested loops straight from the cross-correlation definition, with the
// same-padding offsets (k / 2 before, the rest after).
Tensor4 naive_conv(const Tensor4& x, Conv2d& conv) {
  const auto s = x.shape();
  const std::size_t k = conv.kernel(), before = (k - 1) / 2;
  Tensor4 y({s.n, conv.out_channels(), s.h, s.w});
  for (std::size_t n = 0; n < s.n; ++n)
    for (std::size_t o = 0; o < conv.out_channels(); ++o)
      for (std::size_t r = 0; r < s.h; ++r)
        for (std::size_t c = 0; c < s.w; ++c) {
          double acc = conv.bias().value[o];
          for (std::size_t i = 0; i < s.c; ++i)
            for (std::size_t ky = 0; ky < k; ++ky)
              for (std::size_t kx = 0; kx < k; ++kx) {
                const auto yy = static_cast<std::ptrdiff_t>(r + ky) - static_cast<std::ptrdiff_t>(before);
                const auto xx = static_cast<std::ptrdiff_t>(c + kx) - static_cast<std::ptrdiff_t>(before);
                if (yy < 0 || xx < 0 || yy >= static_cast<std::ptrdiff_t>(s.h) ||
                    xx >= static_cast<std::ptrdiff_t>(s.w)) continue;
                acc += conv.w(o, i, ky, kx) * x.at(n, i, static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
              }
          y.at(n, o, r, c) = acc;
        }
  return y;
}

signal::LogMagImage image_from(const Tensor4& t, std::size_t n, std::size_t valid) {
  signal::LogMagImage img;
  img.size = t.shape().h;
  const auto item = t.item(n);
  img.pixels.assign(item.begin(), item.end());
  img.valid_frames = valid;
  img.segment_index = n;
  return img;
}

}  // namespace

TEST_CASE("conv2d forward") {
  SUBCASE("1x1 identity") {
    Conv2d conv(1, 1, 1);
    conv.w(0, 0, 0, 0) = 1.0;
    const auto x = random_tensor({2, 1, 5, 7}, 1);
    CHECK(conv.forward(x) == x);
  }
  SUBCASE("3x3 box filter on a constant image") {
    Conv2d conv(1, 1, 3);
    for (std::size_t ky = 0; ky < 3; ++ky)
      for (std::size_t kx = 0; kx < 3; ++kx) conv.w(0, 0, ky, kx) = 1.0 / 9.0;
    const Tensor4 x({1, 1, 6, 6}, 2.0);
    const auto y = conv.forward(x);
    CHECK(y.at(0, 0, 2, 3) == doctest::Approx(2.0));
    CHECK(y.at(0, 0, 0, 3) == doctest::Approx(2.0 * 6 / 9));
    CHECK(y.at(0, 0, 0, 0) == doctest::Approx(2.0 * 4 / 9));
    CHECK(y.at(0, 0, 5, 5) == doctest::Approx(2.0 * 4 / 9));
  }
  SUBCASE("matches the direct loops for every kernel size") {
    for (std::size_t k : {1, 2, 3}) {
      std::mt19937_64 rng(k);
      Conv2d conv(3, 5, k);
      conv.init_he(rng);
      for (double& b : conv.bias().value) b = 0.1;
      const auto x = random_tensor({4, 3, 8, 8}, 10 + k);
      const auto y = conv.forward(x);
      const auto ref = naive_conv(x, conv);
      CHECK(testing::max_abs_diff(y.data(), ref.data()) <= 1e-12);
    }
  }
  SUBCASE("channel mismatch") {
    Conv2d conv(2, 1, 3);
    CHECK_THROWS_AS(conv.forward(Tensor4({1, 3, 4, 4})), ShapeError);
    CHECK_THROWS_AS(Conv2d(1, 1, 4), InvalidArgument);
  }
}

TEST_CASE("conv2d backward") {
  for (std::size_t k : {1, 2, 3}) {
    const auto g = testing::check_conv(3, 4, k, 100 + k);
    CHECK(g.max_rel <= 1e-4);
    CHECK(g.checked >= 36);
  }
  std::mt19937_64 rng(5);
  Conv2d conv(2, 3, 3);
  conv.init_he(rng);
  const auto x = random_tensor({2, 2, 5, 5}, 6);
  const auto gx = conv.backward(Tensor4({2, 3, 5, 5}), x);
  CHECK(std::all_of(gx.data().begin(), gx.data().end(), [](double v) { return v == 0.0; }));
  CHECK(std::all_of(conv.weight().grad.begin(), conv.weight().grad.end(), [](double v) { return v == 0.0; }));

  const auto up = random_tensor({2, 3, 5, 5}, 7);
  conv.backward(up, x);
  for (std::size_t o = 0; o < 3; ++o) {
    double s = 0.0;
    for (std::size_t n = 0; n < 2; ++n)
      for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 5; ++c) s += up.at(n, o, r, c);
    CHECK(conv.bias().grad[o] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("relu") {
  const Tensor4 x({1, 1, 1, 3}, std::vector<double>{-1, 0, 2});
  CHECK(relu_forward(x).data()[0] == 0.0);
  CHECK(relu_forward(x).data()[1] == 0.0);
  CHECK(relu_forward(x).data()[2] == 2.0);
  const auto g = relu_backward(Tensor4(x.shape(), 1.0), x);
  CHECK(std::vector<double>(g.data().begin(), g.data().end()) == std::vector<double>{0, 0, 1});
  CHECK(testing::check_relu(3).max_rel <= 1e-6);
}

TEST_CASE("maxpool 2x2") {
  const Tensor4 x({1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  const auto p = maxpool2x2_forward(x);
  CHECK(p.output.size() == 1);
  CHECK(p.output.data()[0] == 4.0);
  const auto g = maxpool2x2_backward(Tensor4({1, 1, 1, 1}, 1.0), p.argmax, x.shape());
  CHECK(std::vector<double>(g.data().begin(), g.data().end()) == std::vector<double>{0, 0, 0, 1});

  const Tensor4 flat({1, 2, 4, 4}, 0.5);
  const auto pf = maxpool2x2_forward(flat);
  CHECK(std::all_of(pf.output.data().begin(), pf.output.data().end(), [](double v) { return v == 0.5; }));
  const auto gf = maxpool2x2_backward(Tensor4({1, 2, 2, 2}, 1.0), pf.argmax, flat.shape());
  // Ties go to the first element of each window.
  CHECK(gf.at(0, 0, 0, 0) == 1.0);
  CHECK(gf.at(0, 0, 0, 1) == 0.0);
  CHECK(gf.at(0, 1, 2, 2) == 1.0);
  CHECK(gf.at(0, 1, 3, 3) == 0.0);

  CHECK(testing::check_maxpool(4).max_rel <= 1e-6);
  CHECK_THROWS_AS(maxpool2x2_forward(Tensor4({1, 1, 3, 4})), ShapeError);

  // Conv then pool as one path.
  std::mt19937_64 rng(9);
  Conv2d conv(2, 3, 3);
  conv.init_he(rng);
  auto in = random_tensor({1, 2, 6, 6}, 10);
  const auto probe = random_tensor({1, 3, 3, 3}, 11);
  const auto y = conv.forward(in);
  const auto pooled = maxpool2x2_forward(y);
  conv.weight().zero_grad();
  const auto gin = conv.backward(maxpool2x2_backward(probe, pooled.argmax, y.shape()), in);
  auto loss = [&] { return testing::dot(maxpool2x2_forward(conv.forward(in)).output, probe); };
  for (std::size_t i = 0; i < conv.weight().size(); i += 5) {
    CHECK(testing::grad_rel_error(conv.weight().grad[i],
                                  testing::central_difference(conv.weight().value[i], loss)) <= 1e-4);
  }
  for (std::size_t i = 0; i < in.size(); i += 7) {
    CHECK(testing::grad_rel_error(gin.data()[i], testing::central_difference(in.data()[i], loss)) <= 1e-4);
  }
}

TEST_CASE("upsample 2x") {
  const Tensor4 x({1, 1, 2, 2}, std::vector<double>{1, 2, 3, 4});
  const auto u = upsample2x_forward(x);
  const std::vector<double> expected{1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 4, 4, 3, 3, 4, 4};
  CHECK(std::vector<double>(u.data().begin(), u.data().end()) == expected);
  const auto g = upsample2x_backward(Tensor4({1, 1, 4, 4}, 1.0));
  CHECK(std::vector<double>(g.data().begin(), g.data().end()) == std::vector<double>{4, 4, 4, 4});
  CHECK(testing::check_upsample(5).max_rel <= 1e-6);

  // Upsample then 2x2 block average returns a ramp exactly.
  Tensor4 ramp({1, 1, 8, 8});
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) ramp.at(0, 0, r, c) = 0.3 * r - 0.2 * c;
  const auto big = upsample2x_forward(ramp);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      const double avg = 0.25 * (big.at(0, 0, 2 * r, 2 * c) + big.at(0, 0, 2 * r + 1, 2 * c) +
                                 big.at(0, 0, 2 * r, 2 * c + 1) + big.at(0, 0, 2 * r + 1, 2 * c + 1));
      CHECK(avg == doctest::Approx(ramp.at(0, 0, r, c)).epsilon(1e-15));
    }
}

TEST_CASE("channel concatenation") {
  const auto a = random_tensor({4, 8, 32, 32}, 1), b = random_tensor({4, 8, 32, 32}, 2);
  const auto c = concat_channels(a, b);
  CHECK(c.shape() == Shape4{4, 16, 32, 32});
  CHECK(c.at(2, 3, 5, 6) == a.at(2, 3, 5, 6));
  CHECK(c.at(2, 11, 5, 6) == b.at(2, 3, 5, 6));
  const auto [sa, sb] = split_channels(c, 8);
  CHECK(sa == a);
  CHECK(sb == b);
  CHECK(testing::check_concat(6).max_rel <= 1e-6);
  CHECK_THROWS_AS(concat_channels(a, random_tensor({4, 8, 16, 32}, 3)), ShapeError);
}

TEST_CASE("mse loss") {
  const auto p = random_tensor({2, 1, 4, 4}, 1);
  const auto same = mse_loss(p, p);
  CHECK(same.loss == 0.0);
  CHECK(std::all_of(same.grad.data().begin(), same.grad.data().end(), [](double v) { return v == 0.0; }));

  Tensor4 shifted = p;
  for (double& v : shifted.data()) v += 1.0;
  CHECK(mse_loss(shifted, p).loss == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<std::size_t> rows{2, 4};
  const auto masked = mse_loss(shifted, p, rows);
  CHECK(masked.valid_count == 2 * 4 + 4 * 4);
  CHECK(masked.loss == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(masked.grad.at(0, 0, 3, 0) == 0.0);
  CHECK(masked.grad.at(0, 0, 1, 0) == doctest::Approx(2.0 / 24));
  CHECK(testing::check_mse(7).max_rel <= 1e-6);
  CHECK_THROWS_AS(mse_loss(p, random_tensor({2, 1, 4, 5}, 2)), ShapeError);
  const std::vector<std::size_t> none{0, 0};
  CHECK_THROWS_AS(mse_loss(p, p, none), InvalidArgument);
}

TEST_CASE("adam") {
  SUBCASE("first step moves by about lr in the sign of -g") {
    Parameter p(3);
    p.grad = {5.0, -0.3, 1e3};
    adam_step(p, {0.01, 0.9, 0.999, 1e-8}, 1);
    CHECK(p.value[0] == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(p.value[1] == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(p.value[2] == doctest::Approx(-0.01).epsilon(1e-6));
  }
  SUBCASE("zero gradient decays the step") {
    Parameter p(1);
    const AdamConfig cfg{0.01, 0.9, 0.999, 1e-8};
    p.grad = {1.0};
    adam_step(p, cfg, 1);
    p.grad = {0.0};
    double prev_delta = 1.0;
    for (std::size_t t = 2; t < 60; ++t) {
      const double before = p.value[0];
      adam_step(p, cfg, t);
      const double delta = std::abs(p.value[0] - before);
      const double m_hat = p.m[0] / (1 - std::pow(cfg.beta1, t));
      const double v_hat = p.v[0] / (1 - std::pow(cfg.beta2, t));
      CHECK(delta <= cfg.learning_rate * std::abs(m_hat) / (std::sqrt(v_hat) + cfg.epsilon) * (1 + 1e-12));
      CHECK(delta <= prev_delta);
      prev_delta = delta;
    }
    CHECK(prev_delta < 0.01 * 0.05);
  }
  SUBCASE("scalar quadratic") {
    Parameter p(1);
    for (std::size_t t = 1; t <= 100; ++t) {
      p.grad[0] = 2.0 * (p.value[0] - 3.0);
      adam_step(p, {0.1, 0.9, 0.999, 1e-8}, t);
    }
    CHECK(std::abs(p.value[0] - 3.0) < 0.5);
  }
  Parameter p(1);
  CHECK_THROWS_AS(adam_step(p, {}, 0), InvalidArgument);
}

TEST_CASE("unet topology") {
  for (std::size_t size : {64, 256}) {
    UNetConfig cfg{4, 8, size};
    UNetModel model(cfg, 1);
    const auto x = random_tensor({1, 1, size, size}, 2);
    const auto y = model.forward(x);
    CHECK(y.shape() == x.shape());
    CHECK(y.all_finite());
  }
  const auto cfg = UNetConfig::desk();
  UNetModel model(cfg, 3);
  const auto layers = model.layers();
  REQUIRE(layers.size() == 2 * 4 + 2 + 3 * 4 + 1);
  for (std::size_t level = 1; level <= 4; ++level) {
    CHECK(layers[2 * (level - 1)].out_channels() == 8u << (level - 1));
    CHECK(layers[2 * (level - 1) + 1].out_channels() == 8u << (level - 1));
    CHECK(layers[2 * (level - 1)].kernel() == 3);
  }
  CHECK(layers[8].out_channels() == 128);
  CHECK(layers[9].out_channels() == 128);
  for (std::size_t level = 4; level >= 1; --level) {
    const std::size_t base = 10 + 3 * (4 - level);
    const std::size_t ch = 8u << (level - 1);
    CHECK(layers[base].kernel() == 2);
    CHECK(layers[base].out_channels() == ch);
    CHECK(layers[base + 1].in_channels() == 2 * ch);
    CHECK(layers[base + 1].out_channels() == ch);
    CHECK(layers[base + 2].out_channels() == ch);
  }
  CHECK(layers.back().kernel() == 1);
  CHECK(layers.back().out_channels() == 1);
  CHECK(UNetConfig::full_scale().base_filters == 64);
  CHECK(UNetConfig::full_scale().image_size == 256);

  UNetModel zero(cfg, 4);
  for (auto& l : zero.layers()) {
    std::fill(l.weight().value.begin(), l.weight().value.end(), 0.0);
    std::fill(l.bias().value.begin(), l.bias().value.end(), 0.0);
  }
  const auto out = zero.forward(random_tensor({2, 1, 64, 64}, 5));
  CHECK(std::all_of(out.data().begin(), out.data().end(), [](double v) { return v == 0.0; }));

  CHECK_THROWS_AS((UNetConfig{4, 8, 40}).validate(), InvalidArgument);
  CHECK_THROWS_AS((UNetConfig{4, 0, 64}).validate(), InvalidArgument);
  CHECK_THROWS_AS(model.forward(Tensor4({1, 1, 32, 32})), ShapeError);
}

TEST_CASE("unet end-to-end gradient") {
  std::vector<double> per_layer;
  const auto g = testing::check_unet({4, 4, 16}, 21, 20, &per_layer);
  CHECK(per_layer.size() == 23);
  CHECK(g.max_rel <= 1e-3);
}

TEST_CASE("training") {
  SUBCASE("identity task") {
    const UNetConfig cfg{2, 4, 16};
    UNetModel model(cfg, 2);
    std::vector<ImagePair> data;
    const auto x = random_tensor({10, 1, 16, 16}, 3);
    for (std::size_t n = 0; n < 10; ++n) {
      auto img = image_from(x, n, 16);
      data.push_back({img, img});
    }
    TrainConfig tc;
    tc.learning_rate = 3e-3;
    tc.epochs = 400;
    tc.seed = 4;
    const auto r = train(model, data, tc);
    CHECK(r.epoch_loss.size() == 400);
    CHECK(r.steps == 400 * 2);
    CHECK(r.epoch_loss.back() < r.epoch_loss.front() / 100);
  }
  SUBCASE("deterministic given the seed") {
    const UNetConfig cfg{2, 4, 16};
    std::vector<ImagePair> data;
    const auto x = random_tensor({7, 1, 16, 16}, 8), t = random_tensor({7, 1, 16, 16}, 9);
    for (std::size_t n = 0; n < 7; ++n) data.push_back({image_from(x, n, 16), image_from(t, n, 12)});
    TrainConfig tc;
    tc.epochs = 3;
    UNetModel a(cfg, 5), b(cfg, 5);
    const auto ra = train(a, data, tc);
    const auto rb = train(b, data, tc);
    CHECK(ra.epoch_loss == rb.epoch_loss);
    CHECK(ra.steps == 3 * 2);
    CHECK(a.forward(x) == b.forward(x));
  }
  SUBCASE("size mismatch") {
    UNetModel model({2, 4, 16}, 1);
    const auto x = random_tensor({1, 1, 8, 8}, 1);
    std::vector<ImagePair> data{{image_from(x, 0, 8), image_from(x, 0, 8)}};
    CHECK_THROWS_AS(train(model, data, TrainConfig{}), ShapeError);
    CHECK_THROWS_AS(train(model, std::vector<ImagePair>{}, TrainConfig{}), InvalidArgument);
  }
}

TEST_CASE("enhance") {
  const UNetConfig cfg{2, 4, 16};
  UNetModel model(cfg, 6);
  const auto x = random_tensor({3, 1, 16, 16}, 7);
  std::vector<signal::LogMagImage> images;
  for (std::size_t n = 0; n < 3; ++n) {
    images.push_back(image_from(x, n, 16 - n));
    images.back().normalized = true;
    images.back().norm_mean = 2.0;
    images.back().norm_std = 3.0;
  }
  const auto out = enhance(model, images);
  REQUIRE(out.size() == 3);
  const auto batch = model.forward(x);
  for (std::size_t n = 0; n < 3; ++n) {
    CHECK(out[n].segment_index == n);
    CHECK(out[n].valid_frames == 16 - n);
    CHECK_FALSE(out[n].normalized);
    CHECK(out[n].norm_mean == 0.0);
    CHECK(out[n].norm_std == 1.0);
    const auto item = batch.item(n);
    CHECK(std::equal(item.begin(), item.end(), out[n].pixels.begin()));
  }
  for (auto& l : model.layers()) {
    std::fill(l.weight().value.begin(), l.weight().value.end(), 0.0);
    std::fill(l.bias().value.begin(), l.bias().value.end(), 0.0);
  }
  for (const auto& img : enhance(model, images)) {
    CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("checkpoints") {
  const auto dir = testing::scratch_dir("neural_ckpt");
  const UNetConfig cfg{3, 4, 32};
  UNetModel model(cfg, 11);
  save_model(model, dir / "m.bin");
  const auto loaded = load_model(dir / "m.bin", cfg);
  CHECK(loaded.config() == cfg);
  const auto x = random_tensor({2, 1, 32, 32}, 12);
  CHECK(loaded.forward(x) == model.forward(x));

  CHECK_THROWS_AS(load_model(dir / "m.bin", UNetConfig{4, 4, 32}), ConfigMismatch);

  const auto size = std::filesystem::file_size(dir / "m.bin");
  std::filesystem::copy_file(dir / "m.bin", dir / "cut.bin");
  std::filesystem::resize_file(dir / "cut.bin", size / 2);
  CHECK_THROWS_AS(load_model(dir / "cut.bin"), FormatError);

  std::filesystem::copy_file(dir / "m.bin", dir / "flip.bin");
  {
    std::fstream f(dir / "flip.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(size / 2));
    f.put('\x5a');
  }
  CHECK_THROWS_AS(load_model(dir / "flip.bin"), FormatError);
  CHECK_THROWS_AS(load_model(dir / "absent.bin"), IoError);
}
