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

#ifndef DECLIP_TESTS_SUPPORT_GRADCHECK_HPP_
#define DECLIP_TESTS_SUPPORT_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "declip/neural/layers.hpp"
#include "declip/neural/loss.hpp"
#include "declip/neural/tensor.hpp"
#include "declip/neural/unet.hpp"

namespace declip::testing {

inline constexpr double kFdStep = 1e-5;

inline nn::Tensor4 random_tensor(nn::Shape4 s, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, scale);
  nn::Tensor4 t(s);
  for (double& v : t.data()) v = d(rng);
  return t;
}

// Relative error with an absolute floor for near-zero gradients.
inline double grad_rel_error(double analytic, double numeric, double floor = 1e-8) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / scale;
}

// Central difference of loss() with respect to x.
inline double central_difference(double& x, const std::function<double()>& loss,
                                 double h = kFdStep) {
  const double saved = x;
  x = saved + h;
  const double up = loss();
  x = saved - h;
  const double down = loss();
  x = saved;
  return (up - down) / (2.0 * h);
}

// <a, b> used as a scalar probe loss: dL/da = b.
inline double dot(const nn::Tensor4& a, const nn::Tensor4& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

// Indices of `count` random entries (all entries when fewer).
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count,
                                               std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  if (n <= count) return idx;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  return idx;
}

struct GradCheck {
  double max_rel = 0.0;
  std::size_t checked = 0;
  void add(double rel) {
    max_rel = std::max(max_rel, rel);
    ++checked;
  }
};

// Conv2d weight, bias and input gradients against central differences of
// L = <conv(x), probe>.
inline GradCheck check_conv(std::size_t in, std::size_t out, std::size_t k, std::uint64_t seed,
                            std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  nn::Conv2d conv(in, out, k);
  conv.init_he(rng);
  for (double& b : conv.bias().value) b = std::normal_distribution<double>(0.0, 0.1)(rng);
  auto x = random_tensor({2, in, 6, 6}, seed + 1);
  const auto probe = random_tensor({2, out, 6, 6}, seed + 2);
  conv.weight().zero_grad();
  conv.bias().zero_grad();
  const auto gx = conv.backward(probe, x);
  auto loss = [&] { return dot(conv.forward(x), probe); };
  GradCheck g;
  for (auto i : sample_indices(conv.weight().size(), samples, rng)) {
    g.add(grad_rel_error(conv.weight().grad[i], central_difference(conv.weight().value[i], loss)));
  }
  for (auto i : sample_indices(conv.bias().size(), samples, rng)) {
    g.add(grad_rel_error(conv.bias().grad[i], central_difference(conv.bias().value[i], loss)));
  }
  for (auto i : sample_indices(x.size(), samples, rng)) {
    g.add(grad_rel_error(gx.data()[i], central_difference(x.data()[i], loss)));
  }
  return g;
}

inline GradCheck check_relu(std::uint64_t seed, std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  auto x = random_tensor({2, 3, 5, 5}, seed);
  // Keep every entry at least 10 h away from the kink.
  for (double& v : x.data()) {
    if (std::abs(v) < 1e-3) v = v < 0 ? -1e-3 : 1e-3;
  }
  const auto probe = random_tensor(x.shape(), seed + 1);
  const auto gx = nn::relu_backward(probe, x);
  auto loss = [&] { return dot(nn::relu_forward(x), probe); };
  GradCheck g;
  for (auto i : sample_indices(x.size(), samples, rng)) {
    g.add(grad_rel_error(gx.data()[i], central_difference(x.data()[i], loss)));
  }
  return g;
}

inline GradCheck check_maxpool(std::uint64_t seed, std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  auto x = random_tensor({2, 3, 6, 6}, seed);
  const auto probe = random_tensor({2, 3, 3, 3}, seed + 1);
  const auto fwd = nn::maxpool2x2_forward(x);
  const auto gx = nn::maxpool2x2_backward(probe, fwd.argmax, x.shape());
  auto loss = [&] { return dot(nn::maxpool2x2_forward(x).output, probe); };
  GradCheck g;
  for (auto i : sample_indices(x.size(), samples, rng)) {
    g.add(grad_rel_error(gx.data()[i], central_difference(x.data()[i], loss)));
  }
  return g;
}

inline GradCheck check_upsample(std::uint64_t seed, std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  auto x = random_tensor({2, 3, 4, 4}, seed);
  const auto probe = random_tensor({2, 3, 8, 8}, seed + 1);
  const auto gx = nn::upsample2x_backward(probe);
  auto loss = [&] { return dot(nn::upsample2x_forward(x), probe); };
  GradCheck g;
  for (auto i : sample_indices(x.size(), samples, rng)) {
    g.add(grad_rel_error(gx.data()[i], central_difference(x.data()[i], loss)));
  }
  return g;
}

inline GradCheck check_concat(std::uint64_t seed, std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  auto a = random_tensor({2, 3, 4, 4}, seed);
  auto b = random_tensor({2, 2, 4, 4}, seed + 1);
  const auto probe = random_tensor({2, 5, 4, 4}, seed + 2);
  const auto [ga, gb] = nn::split_channels(probe, 3);
  auto loss = [&] { return dot(nn::concat_channels(a, b), probe); };
  GradCheck g;
  for (auto i : sample_indices(a.size(), samples, rng)) {
    g.add(grad_rel_error(ga.data()[i], central_difference(a.data()[i], loss)));
  }
  for (auto i : sample_indices(b.size(), samples, rng)) {
    g.add(grad_rel_error(gb.data()[i], central_difference(b.data()[i], loss)));
  }
  return g;
}

inline GradCheck check_mse(std::uint64_t seed, std::size_t samples = 20) {
  std::mt19937_64 rng(seed);
  auto pred = random_tensor({3, 1, 6, 6}, seed);
  const auto target = random_tensor(pred.shape(), seed + 1);
  const std::vector<std::size_t> rows{6, 4, 1};
  const auto r = nn::mse_loss(pred, target, rows);
  auto loss = [&] { return nn::mse_loss(pred, target, rows).loss; };
  GradCheck g;
  for (auto i : sample_indices(pred.size(), samples, rng)) {
    g.add(grad_rel_error(r.grad.data()[i], central_difference(pred.data()[i], loss)));
  }
  return g;
}

// End-to-end: L = <unet(x), probe>, `samples` parameters per layer (weights
// and biases pooled).
inline GradCheck check_unet(const nn::UNetConfig& cfg, std::uint64_t seed,
                            std::size_t samples = 20, std::vector<double>* per_layer = nullptr) {
  std::mt19937_64 rng(seed);
  nn::UNetModel model(cfg, seed);
  for (auto& layer : model.layers()) {
    for (double& b : layer.bias().value) b = std::normal_distribution<double>(0.0, 0.05)(rng);
  }
  const auto x = random_tensor({2, 1, cfg.image_size, cfg.image_size}, seed + 1);
  const auto probe = random_tensor(x.shape(), seed + 2);
  nn::UNetModel::Cache cache;
  model.zero_grad();
  model.forward(x, cache);
  model.backward(cache, probe);
  auto loss = [&] { return dot(model.forward(x), probe); };
  GradCheck g;
  for (auto& layer : model.layers()) {
    GradCheck lg;
    const std::size_t nw = layer.weight().size(), nb = layer.bias().size();
    for (auto i : sample_indices(nw + nb, samples, rng)) {
      auto& p = i < nw ? layer.weight() : layer.bias();
      const std::size_t j = i < nw ? i : i - nw;
      lg.add(grad_rel_error(p.grad[j], central_difference(p.value[j], loss)));
    }
    if (per_layer) per_layer->push_back(lg.max_rel);
    g.max_rel = std::max(g.max_rel, lg.max_rel);
    g.checked += lg.checked;
  }
  return g;
}

}  // namespace declip::testing

#endif  // DECLIP_TESTS_SUPPORT_GRADCHECK_HPP_
