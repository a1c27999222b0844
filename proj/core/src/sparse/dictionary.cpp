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

#include "declip/sparse/dictionary.hpp"

#include <cmath>
#include <numbers>

#include "declip/error.hpp"

namespace declip::sparse {

Dictionary::Dictionary(std::size_t frame_len, std::size_t n_atoms)
    : frame_len_(frame_len), n_atoms_(n_atoms) {
  if (frame_len == 0 || n_atoms < frame_len) {
    throw InvalidArgument("dct_dictionary: need 0 < frame_len <= n_atoms");
  }
  atoms_.resize(frame_len * n_atoms);
  scale_.resize(n_atoms);
  twiddle_.resize(n_atoms);
  const double step = std::numbers::pi / static_cast<double>(n_atoms);
  for (std::size_t j = 0; j < n_atoms; ++j) {
    double* col = atoms_.data() + j * frame_len;
    double norm2 = 0.0;
    for (std::size_t n = 0; n < frame_len; ++n) {
      col[n] = std::cos(step * (static_cast<double>(n) + 0.5) * static_cast<double>(j));
      norm2 += col[n] * col[n];
    }
    scale_[j] = 1.0 / std::sqrt(norm2);
    for (std::size_t n = 0; n < frame_len; ++n) col[n] *= scale_[j];
    twiddle_[j] = std::polar(1.0, -0.5 * step * static_cast<double>(j));
  }

  // Power iteration on D^T D.
  Analyzer analyzer(*this);
  std::vector<double> v(n_atoms), frame(frame_len);
  for (std::size_t j = 0; j < n_atoms; ++j) v[j] = 1.0 + 0.01 * std::sin(1.0 + j);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    double nv = 0.0;
    for (double c : v) nv += c * c;
    nv = std::sqrt(nv);
    for (double& c : v) c /= nv;
    synthesize(v, frame);
    analyzer.apply(frame, v);
    double next = 0.0;
    for (double c : v) next += c * c;
    next = std::sqrt(next);
    if (std::abs(next - lambda) <= 1e-12 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  spectral_norm_sq_ = lambda;
}

void Dictionary::synthesize(std::span<const double> coeffs, std::span<const std::size_t> support,
                            std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j : support) {
    const double a = coeffs[j];
    if (a == 0.0) continue;
    const double* col = atoms_.data() + j * frame_len_;
    for (std::size_t n = 0; n < frame_len_; ++n) out[n] += a * col[n];
  }
}

void Dictionary::synthesize(std::span<const double> coeffs, std::span<double> out) const {
  if (coeffs.size() != n_atoms_ || out.size() != frame_len_) {
    throw ShapeError("Dictionary::synthesize: bad sizes");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < n_atoms_; ++j) {
    const double a = coeffs[j];
    if (a == 0.0) continue;
    const double* col = atoms_.data() + j * frame_len_;
    for (std::size_t n = 0; n < frame_len_; ++n) out[n] += a * col[n];
  }
}

void Dictionary::analyze_dense(std::span<const double> residual, std::span<double> out) const {
  if (residual.size() != frame_len_ || out.size() != n_atoms_) {
    throw ShapeError("Dictionary::analyze_dense: bad sizes");
  }
  for (std::size_t j = 0; j < n_atoms_; ++j) {
    const double* col = atoms_.data() + j * frame_len_;
    double acc = 0.0;
    for (std::size_t n = 0; n < frame_len_; ++n) acc += col[n] * residual[n];
    out[j] = acc;
  }
}

Dictionary::Analyzer::Analyzer(const Dictionary& dict)
    : dict_(&dict), fft_(2 * dict.n_atoms_), spectrum_(dict.n_atoms_ + 1) {}

void Dictionary::Analyzer::apply(std::span<const double> residual, std::span<double> out) {
  if (residual.size() != dict_->frame_len_ || out.size() != dict_->n_atoms_) {
    throw ShapeError("Dictionary::Analyzer: bad sizes");
  }
  // sum_n r[n] cos(pi (n + 1/2) j / N) = Re(e^{-i pi j / 2N} R_{2N}[j]).
  fft_.forward(residual, spectrum_);
  for (std::size_t j = 0; j < dict_->n_atoms_; ++j) {
    out[j] = dict_->scale_[j] * (dict_->twiddle_[j] * spectrum_[j]).real();
  }
}

Dictionary dct_dictionary(std::size_t frame_len, std::size_t n_atoms) {
  return Dictionary(frame_len, n_atoms);
}

}  // namespace declip::sparse
