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

#ifndef DECLIP_SIGNAL_CLIPPING_HPP_
#define DECLIP_SIGNAL_CLIPPING_HPP_

#include <cstdint>
#include <span>

#include "declip/signal/waveform.hpp"

namespace declip::signal {

// sdr() never returns more than this; identical signals map to it.
inline constexpr double kSdrCapDb = 200.0;

// Hard clipping: samples with |x| > theta become theta * sgn(x).
Waveform clip(const Waveform& x, double theta);

// 10 log10(||x||^2 / ||x - y||^2), capped at kSdrCapDb.
double sdr(std::span<const double> x, std::span<const double> y);
double sdr(const Waveform& x, const Waveform& y);

struct ThresholdSolverOptions {
  double tolerance_db = 0.05;
  int max_iterations = 60;
};

// Finds theta in (0, max|x|] with |sdr(x, clip(x, theta)) - target| within
// tolerance by bisection; SDR is non-decreasing in theta and tends to 0 dB as
// theta -> 0, so non-positive targets are unattainable.
double solve_threshold_for_sdr(const Waveform& x, double target_sdr_db,
                               const ThresholdSolverOptions& options = {});

// x plus i.i.d. N(0, sigma2) samples drawn from a generator seeded with seed.
Waveform add_gaussian_noise(const Waveform& x, double sigma2, std::uint64_t seed);

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_CLIPPING_HPP_
