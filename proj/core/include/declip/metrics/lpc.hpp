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

#ifndef DECLIP_METRICS_LPC_HPP_
#define DECLIP_METRICS_LPC_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace declip::metrics {

struct LpcModel {
  std::size_t order = 0;
  // a[0] = 1; prediction error e[n] = sum_k a[k] x[n - k].
  std::vector<double> coefficients;
  std::vector<double> autocorrelation;  // r[0..order]
  std::vector<double> reflection;       // k[1..order]
  double prediction_error = 0.0;
  // False for zero-energy frames; such frames carry no usable envelope.
  bool valid = false;
};

// Autocorrelation r[0..order] of an (already windowed) frame.
std::vector<double> autocorrelation(std::span<const double> frame, std::size_t order);

// Levinson-Durbin recursion on r[0..order].
LpcModel levinson_durbin(std::span<const double> r);

// Autocorrelation-method LPC of an already windowed frame.
LpcModel lpc(std::span<const double> frame, std::size_t order);

}  // namespace declip::metrics

#endif  // DECLIP_METRICS_LPC_HPP_
