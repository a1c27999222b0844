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

#include "declip/signal/clipping.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "declip/error.hpp"

namespace declip::signal {

Waveform clip(const Waveform& x, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw InvalidArgument("clip: theta must be positive and finite");
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    y[i] = std::abs(v) <= theta ? v : std::copysign(theta, v);
  }
  return x.with_samples(std::move(y));
}

double sdr(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("sdr: length mismatch");
  double signal = 0.0, distortion = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    signal += x[i] * x[i];
    const double d = x[i] - y[i];
    distortion += d * d;
  }
  if (signal <= 0.0) throw InvalidArgument("sdr: reference has zero energy");
  if (distortion <= 0.0) return kSdrCapDb;
  return std::min(kSdrCapDb, 10.0 * std::log10(signal / distortion));
}

double sdr(const Waveform& x, const Waveform& y) { return sdr(x.samples(), y.samples()); }

double solve_threshold_for_sdr(const Waveform& x, double target_sdr_db,
                               const ThresholdSolverOptions& options) {
  require_nonempty(x, "solve_threshold_for_sdr");
  if (!std::isfinite(target_sdr_db)) {
    throw InvalidArgument("solve_threshold_for_sdr: target must be finite");
  }
  const double peak = max_abs(x.samples());
  if (peak <= 0.0) throw InvalidArgument("solve_threshold_for_sdr: silent signal");
  if (target_sdr_db <= 0.0 || target_sdr_db >= kSdrCapDb) {
    std::ostringstream msg;
    msg << "target SDR " << target_sdr_db << " dB is unattainable (valid range (0, "
        << kSdrCapDb << ") dB)";
    throw UnattainableTarget(msg.str());
  }

  // Squared distortion for a given theta, without materializing the clipped signal.
  const auto samples = x.samples();
  const double signal = energy(samples);
  auto sdr_at = [&](double theta) {
    double d = 0.0;
    for (double v : samples) {
      const double excess = std::abs(v) - theta;
      if (excess > 0.0) d += excess * excess;
    }
    if (d <= 0.0) return kSdrCapDb;
    return std::min(kSdrCapDb, 10.0 * std::log10(signal / d));
  };

  double lo = 0.0, hi = peak;
  double best = peak, best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double err = sdr_at(mid) - target_sdr_db;
    if (std::abs(err) < best_err) {
      best_err = std::abs(err);
      best = mid;
    }
    // Stop well inside the tolerance so downstream quantization has headroom.
    if (std::abs(err) <= 0.1 * options.tolerance_db) break;
    (err < 0.0 ? lo : hi) = mid;
  }
  if (best_err > options.tolerance_db || best <= 0.0) {
    std::ostringstream msg;
    msg << "target SDR " << target_sdr_db << " dB not reached (closest miss " << best_err
        << " dB)";
    throw UnattainableTarget(msg.str());
  }
  return best;
}

Waveform add_gaussian_noise(const Waveform& x, double sigma2, std::uint64_t seed) {
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("add_gaussian_noise: variance must be non-negative");
  }
  if (sigma2 == 0.0) return x;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
  std::vector<double> y(x.samples().begin(), x.samples().end());
  for (double& v : y) v += noise(rng);
  return x.with_samples(std::move(y));
}

}  // namespace declip::signal
