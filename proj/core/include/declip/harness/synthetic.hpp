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

#ifndef DECLIP_HARNESS_SYNTHETIC_HPP_
#define DECLIP_HARNESS_SYNTHETIC_HPP_

#include <cstdint>

#include "declip/signal/waveform.hpp"

namespace declip::harness {

struct SyntheticSpeechOptions {
  double duration_s = 1.5;
  int sample_rate = signal::kDefaultSampleRate;
  double peak = 0.9;
};

// Speech-like test material: voiced "syllables" built from harmonic
// complexes under a formant-shaped envelope, with vibrato, pitch glides and
// amplitude modulation, separated by short near-silent gaps. Deterministic in
// seed.
signal::Waveform synthesize_speech(std::uint64_t seed, const SyntheticSpeechOptions& options = {});

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_SYNTHETIC_HPP_
