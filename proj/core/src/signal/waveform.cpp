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

#include "declip/signal/waveform.hpp"

#include <cmath>
#include <string>

#include "declip/error.hpp"

namespace declip::signal {

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    throw InvalidArgument("sample rate must be positive, got " +
                          std::to_string(sample_rate_));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InvalidArgument("non-finite sample at index " + std::to_string(i));
    }
  }
}

void require_nonempty(const Waveform& x, const char* what) {
  if (x.empty()) throw InvalidArgument(std::string(what) + ": empty waveform");
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace declip::signal
