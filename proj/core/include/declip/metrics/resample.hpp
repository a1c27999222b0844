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

#ifndef DECLIP_METRICS_RESAMPLE_HPP_
#define DECLIP_METRICS_RESAMPLE_HPP_

#include "declip/signal/waveform.hpp"

namespace declip::metrics {

// Rational-ratio windowed-sinc (Kaiser) resampler with a polyphase
// coefficient table; the cutoff sits at the lower of the two Nyquist rates.
signal::Waveform resample(const signal::Waveform& x, int target_rate);

}  // namespace declip::metrics

#endif  // DECLIP_METRICS_RESAMPLE_HPP_
