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

#ifndef DECLIP_SIGNAL_FFT_HPP_
#define DECLIP_SIGNAL_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>

namespace declip::signal {

// Real-input DFT of a fixed size n. forward() yields n/2+1 bins with the
// e^{-i...} sign convention; inverse() is unnormalized (scales by n).
// One instance is not safe for concurrent use; separate instances are.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  // in.size() <= n (zero-padded to n); out.size() == bins().
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  // in.size() == bins(); out.size() <= n (leading samples of the result).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  void release();

  std::size_t n_ = 0;
  double* real_ = nullptr;
  std::complex<double>* spectrum_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_FFT_HPP_
