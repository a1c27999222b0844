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

#include "declip/sparse/iht.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "declip/error.hpp"
#include "declip/parallel.hpp"
#include "declip/signal/stft.hpp"

namespace declip::sparse {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void residual(Variant variant, std::span<const double> y, const ClipMask& mask,
              std::span<const double> estimate, std::span<double> r) {
  const double theta = mask.theta;
  for (std::size_t i = 0; i < y.size(); ++i) {
    switch (mask.labels[i]) {
      case SampleLabel::kReliable:
        r[i] = y[i] - estimate[i];
        break;
      case SampleLabel::kClippedPositive:
        r[i] = variant == Variant::kConsistentIht ? std::max(0.0, theta - estimate[i]) : 0.0;
        break;
      case SampleLabel::kClippedNegative:
        r[i] = variant == Variant::kConsistentIht ? std::min(0.0, -theta - estimate[i]) : 0.0;
        break;
    }
  }
}

// Keeps the k largest magnitudes (ties to the lower index), zeroes the rest,
// and writes the surviving indices to support.
void hard_threshold(std::span<double> v, std::size_t k, std::vector<std::size_t>& order,
                    std::vector<std::size_t>& support) {
  std::iota(order.begin(), order.end(), std::size_t{0});
  k = std::min(k, v.size());
  auto larger = [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(v[a]), mb = std::abs(v[b]);
    return ma > mb || (ma == mb && a < b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                   larger);
  support.clear();
  for (std::size_t i = 0; i < k; ++i) {
    if (v[order[i]] != 0.0) support.push_back(order[i]);
  }
  for (std::size_t i = k; i < order.size(); ++i) v[order[i]] = 0.0;
  std::sort(support.begin(), support.end());
}

FrameResult solve(Variant variant, std::span<const double> y, const ClipMask& mask,
                  const Dictionary& dict, const SparseSolverConfig& cfg) {
  const std::size_t n = dict.frame_len();
  const std::size_t m = dict.atom_count();
  if (y.size() != n || mask.size() != n) {
    throw ShapeError("declip frame: frame length does not match dictionary");
  }
  cfg.validate(dict);

  FrameResult result;
  result.coefficients.assign(m, 0.0);
  if (mask.reliable_count() == 0) {
    result.samples.assign(y.begin(), y.end());
    result.solvable = false;
    return result;
  }

  Dictionary::Analyzer analyzer(dict);
  const double tol = cfg.tolerance * norm2(y);
  double mu = cfg.step_size > 0.0 ? cfg.step_size : 1.0 / dict.spectral_norm_sq();

  std::vector<double>& a = result.coefficients;
  std::vector<double> candidate(m), gradient(m), estimate(n, 0.0), r(n), r_candidate(n);
  std::vector<double> cand_estimate(n);
  std::vector<std::size_t> order(m), support, cand_support;

  residual(variant, y, mask, estimate, r);
  double rn = norm2(r);
  result.residual_norm = rn;
  result.converged = rn <= tol;

  std::size_t k = std::min(cfg.k_start, cfg.k_max);
  while (!result.converged) {
    for (std::size_t it = 0; it < cfg.max_iters; ++it) {
      analyzer.apply(r, gradient);
      double rn_candidate = rn;
      bool accepted = false;
      for (int halving = 0; halving <= 30; ++halving) {
        for (std::size_t j = 0; j < m; ++j) candidate[j] = a[j] + mu * gradient[j];
        hard_threshold(candidate, k, order, cand_support);
        dict.synthesize(candidate, cand_support, cand_estimate);
        residual(variant, y, mask, cand_estimate, r_candidate);
        rn_candidate = norm2(r_candidate);
        if (rn_candidate <= rn) {
          accepted = true;
          break;
        }
        mu *= 0.5;
        ++result.step_halvings;
      }
      ++result.iterations;
      const double previous = rn;
      if (accepted) {
        a.swap(candidate);
        support.swap(cand_support);
        estimate.swap(cand_estimate);
        r.swap(r_candidate);
        rn = rn_candidate;
      }
      if (cfg.record_trace) {
        result.residual_trace.push_back(rn);
        result.k_trace.push_back(k);
      }
      if (rn <= tol) {
        result.converged = true;
        break;
      }
      if (!accepted || previous - rn <= cfg.stall_tolerance * previous) break;
    }
    if (result.converged || k >= cfg.k_max) break;
    k = std::min(k + cfg.k_step, cfg.k_max);
  }
  result.final_k = k;
  result.residual_norm = rn;

  if (variant == Variant::kConsistentIht) {
    result.samples = consistency_project(estimate, y, mask);
  } else {
    result.samples = estimate;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask.labels[i] == SampleLabel::kReliable) result.samples[i] = y[i];
    }
  }
  return result;
}

}  // namespace

SparseSolverConfig SparseSolverConfig::for_frame_len(std::size_t frame_len) {
  SparseSolverConfig cfg;
  cfg.frame_len = frame_len;
  cfg.frame_shift = std::max<std::size_t>(1, frame_len / 4);
  cfg.n_atoms = 2 * frame_len;
  cfg.k_max = std::max<std::size_t>(1, frame_len / 8);
  return cfg;
}

void SparseSolverConfig::validate(const Dictionary& dict) const {
  if (frame_len == 0 || frame_shift == 0 || frame_shift > frame_len || k_start == 0 ||
      k_step == 0 || k_max == 0 || max_iters == 0 || step_size < 0.0 || !(tolerance >= 0.0) ||
      stall_tolerance < 0.0) {
    throw InvalidArgument("SparseSolverConfig: parameters must be positive");
  }
  if (k_max > dict.atom_count()) {
    throw InvalidArgument("SparseSolverConfig: k_max exceeds the number of atoms");
  }
  if (frame_len != dict.frame_len()) {
    throw InvalidArgument("SparseSolverConfig: frame_len does not match dictionary");
  }
}

std::vector<double> consistency_project(std::span<const double> x_hat,
                                        std::span<const double> y, const ClipMask& mask) {
  if (x_hat.size() != y.size() || y.size() != mask.size()) {
    throw ShapeError("consistency_project: length mismatch");
  }
  std::vector<double> out(x_hat.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    switch (mask.labels[i]) {
      case SampleLabel::kReliable:
        out[i] = y[i];
        break;
      case SampleLabel::kClippedPositive:
        out[i] = std::max(x_hat[i], mask.theta);
        break;
      case SampleLabel::kClippedNegative:
        out[i] = std::min(x_hat[i], -mask.theta);
        break;
    }
  }
  return out;
}

FrameResult iht_declip_frame(std::span<const double> y, const ClipMask& mask,
                             const Dictionary& dict, const SparseSolverConfig& cfg) {
  return solve(Variant::kIht, y, mask, dict, cfg);
}

FrameResult consistent_iht_declip_frame(std::span<const double> y, const ClipMask& mask,
                                        const Dictionary& dict, const SparseSolverConfig& cfg) {
  return solve(Variant::kConsistentIht, y, mask, dict, cfg);
}

FrameResult declip_frame(Variant variant, std::span<const double> y, const ClipMask& mask,
                         const Dictionary& dict, const SparseSolverConfig& cfg) {
  return solve(variant, y, mask, dict, cfg);
}

DeclipReport declip_signal(const signal::Waveform& y, double theta, const Dictionary& dict,
                           const SparseSolverConfig& cfg, Variant variant) {
  if (!(theta > 0.0)) throw InvalidArgument("declip_signal: theta must be positive");
  signal::require_nonempty(y, "declip_signal");
  cfg.validate(dict);

  const auto samples = y.samples();
  const ClipMask mask = build_clip_mask(samples, theta);
  DeclipReport report;
  if (mask.clipped_count() == 0) {
    report.output = y;
    return report;
  }

  // Same framing grid as the STFT: lead padding gives every sample full overlap.
  signal::StftConfig grid;
  grid.frame_len = cfg.frame_len;
  grid.frame_shift = cfg.frame_shift;
  grid.fft_size = cfg.frame_len;
  const std::size_t frames = grid.frame_count(y.size());
  const auto pad = static_cast<std::ptrdiff_t>(grid.lead_padding());
  const auto total = static_cast<std::ptrdiff_t>(y.size());
  const std::size_t len = cfg.frame_len;

  std::vector<FrameResult> solved(frames);
  parallel_for(frames, [&](std::size_t t) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t * cfg.frame_shift) - pad;
    std::vector<double> frame(len, 0.0);
    bool any_clipped = false;
    for (std::size_t k = 0; k < len; ++k) {
      const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(k);
      if (i >= 0 && i < total) {
        frame[k] = samples[static_cast<std::size_t>(i)];
        any_clipped |= mask.labels[static_cast<std::size_t>(i)] != SampleLabel::kReliable;
      }
    }
    if (!any_clipped) {
      solved[t].samples = std::move(frame);
      solved[t].converged = true;
      return;
    }
    solved[t] = solve(variant, frame, slice(mask, start, len), dict, cfg);
    solved[t].coefficients = {};
  });

  const auto w = signal::make_window(signal::WindowKind::kHannPeriodic, len);
  std::vector<double> acc(y.size(), 0.0), weight(y.size(), 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t * cfg.frame_shift) - pad;
    report.unsolvable_frames += solved[t].solvable ? 0 : 1;
    report.unconverged_frames += solved[t].converged ? 0 : 1;
    for (std::size_t k = 0; k < len; ++k) {
      const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(k);
      if (i < 0 || i >= total) continue;
      const double w2 = w[k] * w[k];
      acc[static_cast<std::size_t>(i)] += w2 * solved[t].samples[k];
      weight[static_cast<std::size_t>(i)] += w2;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    // Zero weight only happens without overlap at a window null.
    acc[i] = weight[i] > 1e-12 ? acc[i] / weight[i] : samples[i];
  }
  report.frames = frames;
  report.output = y.with_samples(consistency_project(acc, samples, mask));
  return report;
}

}  // namespace declip::sparse
