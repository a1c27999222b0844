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

#ifndef DECLIP_SIGNAL_WAVEFORM_HPP_
#define DECLIP_SIGNAL_WAVEFORM_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace declip::signal {

inline constexpr int kDefaultSampleRate = 16000;

// Mono time-domain signal. Samples are finite and nominally in [-1, 1];
// the sample rate is positive. Immutable once constructed.
class Waveform {
 public:
  Waveform() = default;
  // Throws InvalidArgument on a non-positive rate or a non-finite sample.
  Waveform(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  int sample_rate() const { return sample_rate_; }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  // Same rate, new samples.
  Waveform with_samples(std::vector<double> samples) const {
    return Waveform(std::move(samples), sample_rate_);
  }

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kDefaultSampleRate;
};

// Throws InvalidArgument when x has no samples.
void require_nonempty(const Waveform& x, const char* what);

double energy(std::span<const double> x);
double max_abs(std::span<const double> x);

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_WAVEFORM_HPP_
