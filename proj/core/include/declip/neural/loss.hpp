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

#ifndef DECLIP_NEURAL_LOSS_HPP_
#define DECLIP_NEURAL_LOSS_HPP_

#include <cstddef>
#include <span>

#include "declip/neural/tensor.hpp"

namespace declip::nn {

struct LossResult {
  double loss = 0.0;
  Tensor4 grad;
  std::size_t valid_count = 0;
};

// Mean squared error over valid pixels. valid_rows[n] is the number of
// leading rows of item n that count (all rows when valid_rows is empty).
// Gradient 2 (pred - target) / N_valid on valid pixels, zero elsewhere.
LossResult mse_loss(const Tensor4& pred, const Tensor4& target,
                    std::span<const std::size_t> valid_rows = {});

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_LOSS_HPP_
