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

#include "declip/signal/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <utility>

#include "declip/error.hpp"

namespace declip::signal {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("RealFft: size must be positive");
  real_ = fftw_alloc_real(n);
  spectrum_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n / 2 + 1));
  auto* spec = reinterpret_cast<fftw_complex*>(spectrum_);
  std::lock_guard lock(planner_mutex());
  const int size = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_r2c_1d(size, real_, spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(size, spec, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() { release(); }

RealFft::RealFft(RealFft&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      spectrum_(std::exchange(other.spectrum_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

RealFft& RealFft::operator=(RealFft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = std::exchange(other.n_, 0);
    real_ = std::exchange(other.real_, nullptr);
    spectrum_ = std::exchange(other.spectrum_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void RealFft::release() {
  if (forward_plan_ != nullptr || inverse_plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  }
  forward_plan_ = inverse_plan_ = nullptr;
  if (real_) fftw_free(real_);
  if (spectrum_) fftw_free(spectrum_);
  real_ = nullptr;
  spectrum_ = nullptr;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() > n_ || out.size() != bins()) throw ShapeError("RealFft::forward: bad sizes");
  std::copy(in.begin(), in.end(), real_);
  std::fill(real_ + in.size(), real_ + n_, 0.0);
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  std::copy(spectrum_, spectrum_ + bins(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != bins() || out.size() > n_) throw ShapeError("RealFft::inverse: bad sizes");
  std::copy(in.begin(), in.end(), spectrum_);
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  std::copy(real_, real_ + out.size(), out.begin());
}

}  // namespace declip::signal
