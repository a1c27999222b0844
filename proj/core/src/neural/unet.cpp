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

#include "declip/neural/unet.hpp"

#include <random>

#include "declip/error.hpp"

namespace declip::nn {

void UNetConfig::validate() const {
  if (depth == 0 || base_filters == 0 || image_size == 0) {
    throw InvalidArgument("UNetConfig: depth, base_filters and image_size must be positive");
  }
  if (depth > 12 || image_size % (std::size_t{1} << depth) != 0) {
    throw InvalidArgument("UNetConfig: image_size " + std::to_string(image_size) +
                          " is not divisible by 2^depth");
  }
  if (final_activation != FinalActivation::kLinear) {
    throw InvalidArgument("UNetConfig: only a linear final activation is supported");
  }
}

UNetModel::UNetModel(const UNetConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  const std::size_t d = config_.depth;
  layers_.reserve(5 * d + 3);
  std::size_t in = 1;
  for (std::size_t level = 1; level <= d; ++level) {
    layers_.emplace_back(in, config_.channels(level), 3);
    layers_.emplace_back(config_.channels(level), config_.channels(level), 3);
    in = config_.channels(level);
  }
  layers_.emplace_back(in, config_.channels(d + 1), 3);
  layers_.emplace_back(config_.channels(d + 1), config_.channels(d + 1), 3);
  for (std::size_t level = d; level >= 1; --level) {
    const std::size_t ch = config_.channels(level);
    layers_.emplace_back(config_.channels(level + 1), ch, 2);
    layers_.emplace_back(2 * ch, ch, 3);
    layers_.emplace_back(ch, ch, 3);
  }
  layers_.emplace_back(config_.channels(1), 1, 1);

  std::mt19937_64 rng(seed);
  for (auto& layer : layers_) layer.init_he(rng);
}

std::size_t UNetModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) n += layer.weight().size() + layer.bias().size();
  return n;
}

void UNetModel::zero_grad() {
  for (auto& layer : layers_) {
    layer.weight().zero_grad();
    layer.bias().zero_grad();
  }
}

Tensor4 UNetModel::forward(const Tensor4& images) const { return run(images, nullptr); }

Tensor4 UNetModel::forward(const Tensor4& images, Cache& cache) const {
  return run(images, &cache);
}

Tensor4 UNetModel::run(const Tensor4& images, Cache* cache) const {
  const Shape4& s = images.shape();
  if (s.c != 1 || s.h != config_.image_size || s.w != config_.image_size) {
    throw ShapeError("unet_forward: expected (n,1," + std::to_string(config_.image_size) + "," +
                     std::to_string(config_.image_size) + "), got " + s.str());
  }
  if (cache != nullptr) {
    *cache = {};
    cache->conv_inputs.resize(layers_.size());
    cache->pre_activations.resize(layers_.size());
  }
  auto conv = [&](std::size_t i, const Tensor4& x) {
    Tensor4 pre = layers_[i].forward(x);
    if (cache != nullptr) cache->conv_inputs[i] = x;
    if (i == final_layer()) return pre;
    Tensor4 act = relu_forward(pre);
    if (cache != nullptr) cache->pre_activations[i] = std::move(pre);
    return act;
  };

  const std::size_t d = config_.depth;
  std::vector<Tensor4> skips(d + 1);
  Tensor4 x = images;
  for (std::size_t level = 1; level <= d; ++level) {
    x = conv(enc(level, 1), conv(enc(level, 0), x));
    skips[level] = x;
    PoolOutput pooled = maxpool2x2_forward(x);
    if (cache != nullptr) {
      cache->pool_input_shapes.push_back(x.shape());
      cache->pool_argmax.push_back(std::move(pooled.argmax));
    }
    x = std::move(pooled.output);
  }
  x = conv(bottleneck(1), conv(bottleneck(0), x));
  for (std::size_t level = d; level >= 1; --level) {
    Tensor4 up = conv(dec(level, 0), upsample2x_forward(x));
    x = conv(dec(level, 2), conv(dec(level, 1), concat_channels(skips[level], up)));
  }
  return conv(final_layer(), x);
}

void UNetModel::backward(const Cache& cache, const Tensor4& grad_output) {
  if (cache.conv_inputs.size() != layers_.size() || cache.pool_argmax.size() != config_.depth) {
    throw InvalidArgument("unet backward: missing cached activations");
  }
  auto conv_back = [&](std::size_t i, const Tensor4& g) {
    if (cache.conv_inputs[i].size() == 0) {
      throw InvalidArgument("unet backward: missing cached input for layer " + std::to_string(i));
    }
    if (i == final_layer()) return layers_[i].backward(g, cache.conv_inputs[i]);
    return layers_[i].backward(relu_backward(g, cache.pre_activations[i]), cache.conv_inputs[i]);
  };

  const std::size_t d = config_.depth;
  std::vector<Tensor4> skip_grads(d + 1);
  Tensor4 g = conv_back(final_layer(), grad_output);
  for (std::size_t level = 1; level <= d; ++level) {
    g = conv_back(dec(level, 1), conv_back(dec(level, 2), g));
    auto [g_skip, g_up] = split_channels(g, config_.channels(level));
    skip_grads[level] = std::move(g_skip);
    g = upsample2x_backward(conv_back(dec(level, 0), g_up));
  }
  g = conv_back(bottleneck(0), conv_back(bottleneck(1), g));
  for (std::size_t level = d; level >= 1; --level) {
    Tensor4 g_pool_in = maxpool2x2_backward(g, cache.pool_argmax[level - 1],
                                            cache.pool_input_shapes[level - 1]);
    auto acc = g_pool_in.data();
    const auto extra = skip_grads[level].data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += extra[i];
    g = conv_back(enc(level, 0), conv_back(enc(level, 1), g_pool_in));
  }
}

}  // namespace declip::nn
