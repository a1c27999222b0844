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

#ifndef DECLIP_METRICS_LLR_HPP_
#define DECLIP_METRICS_LLR_HPP_

#include <cstddef>

#include "declip/signal/waveform.hpp"

namespace declip::metrics {

struct LlrConfig {
  // 0 picks round(sample_rate / 1000), i.e. 16 at 16 kHz.
  std::size_t order = 0;
  double frame_ms = 32.0;
  double shift_ms = 8.0;
  // Mean over this fraction of the smallest per-frame distances.
  double keep_fraction = 0.95;
};

inline constexpr double kLlrMax = 2.0;

// Log-likelihood ratio between LPC envelopes of clean and degraded frames on
// a shared Hann-windowed grid from sample 0. Per-frame values are clamped to
// [0, 2]; frames where either signal has zero energy are excluded. Throws
// InsufficientData when every frame is excluded.
double llr(const signal::Waveform& clean, const signal::Waveform& degraded,
           const LlrConfig& cfg = {});

}  // namespace declip::metrics

#endif  // DECLIP_METRICS_LLR_HPP_
