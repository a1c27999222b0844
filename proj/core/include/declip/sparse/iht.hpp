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

#ifndef DECLIP_SPARSE_IHT_HPP_
#define DECLIP_SPARSE_IHT_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "declip/signal/waveform.hpp"
#include "declip/sparse/clip_mask.hpp"
#include "declip/sparse/dictionary.hpp"

namespace declip::sparse {

enum class Variant { kIht, kConsistentIht };

struct SparseSolverConfig {
  std::size_t frame_len = 512;
  std::size_t frame_shift = 128;
  std::size_t n_atoms = 1024;
  // Sparsity schedule: k starts at k_start and grows by k_step after each
  // block of max_iters iterations, up to k_max.
  std::size_t k_start = 1;
  std::size_t k_step = 1;
  std::size_t k_max = 64;
  std::size_t max_iters = 50;
  // Gradient step; 0 selects 1 / ||D||^2.
  double step_size = 0.0;
  // Stop once ||residual|| <= tolerance * ||observed frame||.
  double tolerance = 1e-3;
  // Leave the current k early once one iteration improves the residual by
  // less than this fraction. 0 disables.
  double stall_tolerance = 1e-4;
  bool record_trace = false;

  // Defaults scaled to a frame length: shift = len / 4, 2x overcomplete,
  // k_max = len / 8.
  static SparseSolverConfig for_frame_len(std::size_t frame_len);
  void validate(const Dictionary& dict) const;
};

struct FrameResult {
  std::vector<double> samples;
  std::vector<double> coefficients;
  bool solvable = true;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t final_k = 0;
  std::size_t step_halvings = 0;
  double residual_norm = 0.0;
  // Residual norm after each iteration, and the k in force, when recorded.
  std::vector<double> residual_trace;
  std::vector<std::size_t> k_trace;
};

// Reliable positions take y; clipped-positive positions max(x, theta);
// clipped-negative positions min(x, -theta).
std::vector<double> consistency_project(std::span<const double> x_hat,
                                        std::span<const double> y, const ClipMask& mask);

// Plain IHT: fits the reliable samples only, then overwrites them with y.
FrameResult iht_declip_frame(std::span<const double> y, const ClipMask& mask,
                             const Dictionary& dict, const SparseSolverConfig& cfg);

// Consistent IHT: the residual also penalizes clipped-sample estimates that
// fall short of +-theta; the final estimate is consistency-projected.
FrameResult consistent_iht_declip_frame(std::span<const double> y, const ClipMask& mask,
                                        const Dictionary& dict, const SparseSolverConfig& cfg);

FrameResult declip_frame(Variant variant, std::span<const double> y, const ClipMask& mask,
                         const Dictionary& dict, const SparseSolverConfig& cfg);

struct DeclipReport {
  signal::Waveform output;
  std::size_t frames = 0;
  std::size_t unsolvable_frames = 0;
  std::size_t unconverged_frames = 0;
};

// Frame-wise declipping of a whole signal: rectangular frames on the config's
// grid are declipped independently, blended with Hann^2 weights, and the
// blend is projected back onto the consistency set.
DeclipReport declip_signal(const signal::Waveform& y, double theta, const Dictionary& dict,
                           const SparseSolverConfig& cfg, Variant variant);

}  // namespace declip::sparse

#endif  // DECLIP_SPARSE_IHT_HPP_
