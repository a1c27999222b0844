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

#include "declip/neural/adam.hpp"

#include <cmath>

#include "declip/error.hpp"

namespace declip::nn {

void adam_step(Parameter& p, const AdamConfig& cfg, std::size_t t) {
  if (t == 0) throw InvalidArgument("adam_step: step counter starts at 1");
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double g = p.grad[i];
    p.m[i] = cfg.beta1 * p.m[i] + (1.0 - cfg.beta1) * g;
    p.v[i] = cfg.beta2 * p.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = p.m[i] / c1;
    const double v_hat = p.v[i] / c2;
    p.value[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

void adam_step(UNetModel& model, const AdamConfig& cfg, std::size_t t) {
  for (auto& layer : model.layers()) {
    adam_step(layer.weight(), cfg, t);
    adam_step(layer.bias(), cfg, t);
  }
}

}  // namespace declip::nn
