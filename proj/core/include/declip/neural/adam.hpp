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

#ifndef DECLIP_NEURAL_ADAM_HPP_
#define DECLIP_NEURAL_ADAM_HPP_

#include <cstddef>

#include "declip/neural/layers.hpp"
#include "declip/neural/unet.hpp"

namespace declip::nn {

struct AdamConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update of p from p.grad at step t >= 1.
void adam_step(Parameter& p, const AdamConfig& cfg, std::size_t t);
void adam_step(UNetModel& model, const AdamConfig& cfg, std::size_t t);

}  // namespace declip::nn

#endif  // DECLIP_NEURAL_ADAM_HPP_
