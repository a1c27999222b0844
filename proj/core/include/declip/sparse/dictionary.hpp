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

#ifndef DECLIP_SPARSE_DICTIONARY_HPP_
#define DECLIP_SPARSE_DICTIONARY_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "declip/signal/fft.hpp"

namespace declip::sparse {

// Overcomplete DCT frame: atom j is cos(pi (n + 1/2) j / n_atoms) over
// n = 0..frame_len-1, scaled to unit L2 norm. With n_atoms == frame_len this
// is the orthonormal DCT-II basis.
class Dictionary {
 public:
  Dictionary(std::size_t frame_len, std::size_t n_atoms);

  std::size_t frame_len() const { return frame_len_; }
  std::size_t atom_count() const { return n_atoms_; }

  // Column j, frame_len samples.
  std::span<const double> atom(std::size_t j) const {
    return {atoms_.data() + j * frame_len_, frame_len_};
  }

  // out = D * coeffs, touching only the listed support.
  void synthesize(std::span<const double> coeffs, std::span<const std::size_t> support,
                  std::span<double> out) const;
  void synthesize(std::span<const double> coeffs, std::span<double> out) const;

  // Squared spectral norm ||D||^2, estimated by power iteration at construction.
  double spectral_norm_sq() const { return spectral_norm_sq_; }

  // Computes D^T r through one real FFT of length 2 * n_atoms. Holds scratch
  // buffers; use one Analyzer per thread.
  class Analyzer {
   public:
    explicit Analyzer(const Dictionary& dict);
    void apply(std::span<const double> residual, std::span<double> out);

   private:
    const Dictionary* dict_;
    signal::RealFft fft_;
    std::vector<std::complex<double>> spectrum_;
  };

  // Dense reference for D^T r, O(frame_len * n_atoms).
  void analyze_dense(std::span<const double> residual, std::span<double> out) const;

 private:
  std::size_t frame_len_;
  std::size_t n_atoms_;
  std::vector<double> atoms_;  // column-major, frame_len x n_atoms
  std::vector<double> scale_;  // 1 / ||unscaled atom j||
  std::vector<std::complex<double>> twiddle_;  // e^{-i pi j / (2 n_atoms)}
  double spectral_norm_sq_ = 1.0;
};

Dictionary dct_dictionary(std::size_t frame_len, std::size_t n_atoms);

}  // namespace declip::sparse

#endif  // DECLIP_SPARSE_DICTIONARY_HPP_
