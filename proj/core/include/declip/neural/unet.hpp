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

#ifndef DECLIP_NEURAL_UNET_HPP_
#define DECLIP_NEURAL_UNET_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "declip/neural/layers.hpp"
#include "declip/neural/tensor.hpp"

namespace declip::nn {

enum class FinalActivation : std::uint32_t { kLinear = 0 };

struct UNetConfig {
  std::size_t depth = 4;
  std::size_t base_filters = 8;
  std::size_t image_size = 64;
  FinalActivation final_activation = FinalActivation::kLinear;

  // Desk scale: 64x64 images, 8 base filters.
  static UNetConfig desk() { return {}; }
  // 256x256 spectrum images, 64 base filters.
  static UNetConfig full_scale() { return {4, 64, 256, FinalActivation::kLinear}; }

  // Channels produced at contraction level `level` (1-based); level depth+1
  // is the bottleneck.
  std::size_t channels(std::size_t level) const { return base_filters << (level - 1); }
  void validate() const;

  friend bool operator==(const UNetConfig&, const UNetConfig&) = default;
};

// Per contraction level: conv3x3+ReLU twice, then 2x2 max-pool. Bottleneck:
// conv3x3+ReLU twice. Per expansion level: 2x upsample, conv2x2+ReLU,
// concatenate [skip, upsampled], conv3x3+ReLU twice. Then a 1x1 conv with a
// linear output. All convolutions preserve spatial size.
class UNetModel {
 public:
  // Activations retained by a training forward pass.
  struct Cache {
    std::vector<Tensor4> conv_inputs;
    std::vector<Tensor4> pre_activations;
    std::vector<std::vector<std::uint32_t>> pool_argmax;
    std::vector<Shape4> pool_input_shapes;
  };

  UNetModel(const UNetConfig& config, std::uint64_t seed);

  const UNetConfig& config() const { return config_; }
  std::span<Conv2d> layers() { return layers_; }
  std::span<const Conv2d> layers() const { return layers_; }
  std::size_t parameter_count() const;

  // images: n x 1 x image_size x image_size.
  Tensor4 forward(const Tensor4& images) const;
  Tensor4 forward(const Tensor4& images, Cache& cache) const;
  // Accumulates parameter gradients for d(loss)/d(output) = grad_output.
  void backward(const Cache& cache, const Tensor4& grad_output);

  void zero_grad();

 private:
  // Layer indices in topology order.
  std::size_t enc(std::size_t level, std::size_t j) const { return 2 * (level - 1) + j; }
  std::size_t bottleneck(std::size_t j) const { return 2 * config_.depth + j; }
  std::size_t dec(std::size_t level, std::size_t j) const {
    return 2 * config_.depth + 2 + 3 * (config_.depth - level) + j;
  }
  std::size_t final_layer() const { return layers_.size() - 1; }

  Tensor4 run(const Tensor4& images, Cache* cache) const;

  UNetConfig config_;
  std::vector<Conv2d> layers_;
};

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_UNET_HPP_
