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

#ifndef DECLIP_NEURAL_LAYERS_HPP_
#define DECLIP_NEURAL_LAYERS_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "declip/neural/tensor.hpp"

namespace declip::nn {

// A trainable array with its gradient accumulator and Adam moments.
struct Parameter {
  std::vector<double> value, grad, m, v;

  explicit Parameter(std::size_t n = 0) : value(n, 0.0), grad(n, 0.0), m(n, 0.0), v(n, 0.0) {}
  std::size_t size() const { return value.size(); }
  void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// Stride-1 "same" cross-correlation. Odd kernels pad symmetrically; the 2x2
// kernel pads one row/column on the bottom/right.
class Conv2d {
 public:
  Conv2d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel);

  std::size_t in_channels() const { return in_; }
  std::size_t out_channels() const { return out_; }
  std::size_t kernel() const { return k_; }

  // weight layout: [out][in][ky][kx]
  Parameter& weight() { return weight_; }
  const Parameter& weight() const { return weight_; }
  Parameter& bias() { return bias_; }
  const Parameter& bias() const { return bias_; }

  double& w(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
    return weight_.value[((o * in_ + i) * k_ + ky) * k_ + kx];
  }

  // He-normal weights (std sqrt(2 / fan_in)), zero biases.
  void init_he(std::mt19937_64& rng);

  Tensor4 forward(const Tensor4& input) const;
  // Accumulates weight/bias gradients and returns the input gradient.
  Tensor4 backward(const Tensor4& grad_output, const Tensor4& input);

 private:
  std::size_t in_, out_, k_;
  Parameter weight_, bias_;
};

Tensor4 relu_forward(const Tensor4& x);
// Gradient passes where x > 0; at exactly 0 it is 0.
Tensor4 relu_backward(const Tensor4& grad_output, const Tensor4& x);

struct PoolOutput {
  Tensor4 output;
  // Flat input index of each window's maximum (first hit on ties).
  std::vector<std::uint32_t> argmax;
};

PoolOutput maxpool2x2_forward(const Tensor4& x);
Tensor4 maxpool2x2_backward(const Tensor4& grad_output, const std::vector<std::uint32_t>& argmax,
                            const Shape4& input_shape);

// Nearest-neighbour 2x upsampling; backward sums each 2x2 block.
Tensor4 upsample2x_forward(const Tensor4& x);
Tensor4 upsample2x_backward(const Tensor4& grad_output);

// Channel-axis concatenation [a, b]; split inverts it given a's channel count.
Tensor4 concat_channels(const Tensor4& a, const Tensor4& b);
std::pair<Tensor4, Tensor4> split_channels(const Tensor4& x, std::size_t first_channels);

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_LAYERS_HPP_
