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

#include "declip/metrics/lpc.hpp"

#include <cmath>

#include "declip/error.hpp"

namespace declip::metrics {

std::vector<double> autocorrelation(std::span<const double> frame, std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t lag = 0; lag <= order && lag < frame.size(); ++lag) {
    double acc = 0.0;
    for (std::size_t n = lag; n < frame.size(); ++n) acc += frame[n] * frame[n - lag];
    r[lag] = acc;
  }
  return r;
}

LpcModel levinson_durbin(std::span<const double> r) {
  if (r.empty()) throw InvalidArgument("levinson_durbin: empty autocorrelation");
  LpcModel m;
  m.order = r.size() - 1;
  m.autocorrelation.assign(r.begin(), r.end());
  m.coefficients.assign(m.order + 1, 0.0);
  m.coefficients[0] = 1.0;
  m.reflection.assign(m.order, 0.0);
  if (!(r[0] > 1e-20)) return m;

  std::vector<double>& a = m.coefficients;
  std::vector<double> prev(m.order + 1, 0.0);
  double err = r[0];
  for (std::size_t i = 1; i <= m.order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    const double next_err = err * (1.0 - k * k);
    if (!(next_err > 0.0)) {
      // Numerically singular (e.g. a pure tone): keep the order i-1 model.
      break;
    }
    m.reflection[i - 1] = k;
    prev = a;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err = next_err;
  }
  m.prediction_error = err;
  m.valid = true;
  return m;
}

LpcModel lpc(std::span<const double> frame, std::size_t order) {
  if (order == 0 || frame.size() <= order) {
    throw InvalidArgument("lpc: frame length must exceed the model order");
  }
  return levinson_durbin(autocorrelation(frame, order));
}

}  // namespace declip::metrics
