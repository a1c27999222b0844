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


// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Usage: acceptance [--workdir DIR] [--only N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "support/gradcheck.hpp"
#include "support/signals.hpp"

#include "declip/harness/experiment.hpp"
#include "declip/harness/methods.hpp"
#include "declip/metrics/estoi.hpp"
#include "declip/metrics/llr.hpp"
#include "declip/neural/loss.hpp"
#include "declip/neural/trainer.hpp"
#include "declip/neural/unet.hpp"
#include "declip/signal/clipping.hpp"
#include "declip/signal/stft.hpp"
#include "declip/signal/wav_io.hpp"
#include "declip/sparse/clip_mask.hpp"
#include "declip/sparse/dictionary.hpp"
#include "declip/sparse/iht.hpp"

using namespace declip;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const std::vector<double> kTestGrid{0.5, 1.5, 3.5, 7.5, 12.5, 17.5};

signal::Waveform utterance(std::uint64_t i) {
  return signal::quantize_pcm16(harness::synthesize_speech(harness::derive_seed(2026, i)));
}

// STFT/ISTFT on 100 one-second white-noise signals.
Outcome stft_round_trip() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const signal::Waveform x(testing::gaussian(16000, 1000 + s), 16000);
    const auto y = signal::istft(signal::stft(x, signal::StftConfig{}));
    if (y.size() != x.size()) return {false, "length changed"};
    worst = std::max(worst, testing::rel_l2(y.samples(), x.samples()));
  }
  return {worst <= 1e-6, "max relative L2 error " + fmt("%.3g", worst) + " (<= 1e-6)"};
}

Outcome threshold_solver() {
  double worst = 0.0;
  for (std::uint64_t u = 0; u < 20; ++u) {
    const auto x = utterance(u);
    for (double target : kTestGrid) {
      const double theta = signal::solve_threshold_for_sdr(x, target);
      worst = std::max(worst, std::abs(signal::sdr(x, signal::clip(x, theta)) - target));
    }
  }
  return {worst <= 0.05, "120 targets, max |realized - target| " + fmt("%.4f", worst) + " dB (<= 0.05)"};
}

Outcome gradients() {
  double layer_worst = 0.0;
  std::size_t checked = 0;
  auto take = [&](const testing::GradCheck& g) {
    layer_worst = std::max(layer_worst, g.max_rel);
    checked += g.checked;
  };
  for (std::size_t k : {1u, 3u}) take(testing::check_conv(3, 4, k, 700 + k, 20));
  take(testing::check_relu(711, 20));
  take(testing::check_maxpool(712, 20));
  take(testing::check_upsample(713, 20));
  take(testing::check_concat(714, 20));
  take(testing::check_mse(715, 20));
  std::vector<double> per_layer;
  const auto net = testing::check_unet({4, 4, 16}, 716, 20, &per_layer);
  const bool ok = layer_worst <= 1e-4 && net.max_rel <= 1e-3;
  return {ok, "layers max rel " + fmt("%.2e", layer_worst) + " (<= 1e-4) over " +
                  std::to_string(checked) + " values; 16x16 U-Net max rel " +
                  fmt("%.2e", net.max_rel) + " (<= 1e-3) over " +
                  std::to_string(per_layer.size()) + " layers x 20 parameters"};
}

// Five smooth log-spectrum-like fields and their clipped versions.
std::vector<nn::ImagePair> overfit_batch(std::size_t size) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(0.5, 1.0), phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> freq(1, 4);
  std::vector<nn::ImagePair> pairs;
  for (int n = 0; n < 5; ++n) {
    nn::ImagePair p;
    p.input.size = p.target.size = size;
    p.input.valid_frames = p.target.valid_frames = size;
    p.input.pixels.assign(size * size, 0.0);
    p.target.pixels.assign(size * size, 0.0);
    for (int c = 0; c < 4; ++c) {
      const double a = amp(rng), ph = phase(rng);
      const int fx = freq(rng), fy = freq(rng);
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
          const double u = static_cast<double>(i) / size, v = static_cast<double>(j) / size;
          p.target.pixels[i * size + j] +=
              0.6 * a * std::cos(2.0 * std::numbers::pi * (fx * u + fy * v) + ph);
        }
      }
    }
    for (std::size_t k = 0; k < size * size; ++k) {
      p.input.pixels[k] = std::clamp(p.target.pixels[k], -0.5, 0.5);
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

Outcome overfit() {
  const auto cfg = nn::UNetConfig::desk();
  const auto pairs = overfit_batch(cfg.image_size);
  std::vector<signal::LogMagImage> in, out;
  for (const auto& p : pairs) {
    in.push_back(p.input);
    out.push_back(p.target);
  }
  const auto X = nn::images_to_tensor(in);
  const auto T = nn::images_to_tensor(out);
  nn::UNetModel model(cfg, 1);
  nn::TrainConfig tc;  // lr 2e-4, Adam defaults
  nn::Trainer trainer(model, tc);
  const double first = trainer.step(X, T);
  for (int s = 1; s < 500; ++s) trainer.step(X, T);
  const double last = nn::mse_loss(model.forward(X), T).loss;
  const double ratio = first / last;
  return {ratio >= 100.0, "MSE " + fmt("%.4g", first) + " -> " + fmt("%.4g", last) +
                              " after 500 steps, reduction " + fmt("%.1f", ratio) + "x (>= 100x)"};
}

Outcome sparse_recovery() {
  const auto d = sparse::dct_dictionary(512, 1024);
  sparse::SparseSolverConfig cfg;
  cfg.k_start = 3;
  cfg.k_max = 3;
  cfg.max_iters = 400;
  cfg.tolerance = 1e-12;
  cfg.stall_tolerance = 0.0;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, 1023);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  std::bernoulli_distribution sign;
  int exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(1024, 0.0);
    for (int placed = 0; placed < 3;) {
      const auto j = pick(rng);
      if (a[j] != 0.0) continue;
      a[j] = (sign(rng) ? 1.0 : -1.0) * mag(rng);
      ++placed;
    }
    std::vector<double> x(512, 0.0);
    for (std::size_t j = 0; j < 1024; ++j) {
      if (a[j] == 0.0) continue;
      const auto atom = d.atom(j);
      for (std::size_t n = 0; n < 512; ++n) x[n] += a[j] * atom[n];
    }
    const auto mask = sparse::build_clip_mask(x, 10.0);
    const auto r = sparse::iht_declip_frame(x, mask, d, cfg);
    // Recovery error on the coefficient vector.
    double err = 0.0, aref = 0.0;
    for (std::size_t j = 0; j < 1024; ++j) {
      err += (r.coefficients[j] - a[j]) * (r.coefficients[j] - a[j]);
      aref += a[j] * a[j];
    }
    exact += std::sqrt(err / aref) <= 1e-8 ? 1 : 0;
  }
  return {exact >= 95, std::to_string(exact) + "/100 frames with relative error <= 1e-8 (>= 95)"};
}

// Shared by the consistency and directional criteria.
struct DeclipRun {
  std::size_t violations = 0;
  std::size_t samples = 0;
  double sdr_in = 0.0, sdr_out = 0.0, estoi_in = 0.0, estoi_out = 0.0;
  double seconds = 0.0;
};

const DeclipRun& cons_iht_run() {
  static const DeclipRun run = [] {
    DeclipRun r;
    const auto start = std::chrono::steady_clock::now();
    harness::MethodConfig mc;
    mc.method = harness::Method::kConsistentIht;
    const auto declipper = harness::make_declipper(mc);
    for (std::uint64_t u = 0; u < 20; ++u) {
      const auto x = utterance(100 + u);
      const auto c = harness::clip_to_sdr(x, 3.5);
      const auto& y = c.samples;
      const auto out = declipper->run(y, c.theta);
      for (std::size_t i = 0; i < y.size(); ++i) {
        const bool ok = std::abs(y[i]) < c.theta ? out[i] == y[i]
                        : y[i] > 0              ? out[i] >= c.theta
                                                : out[i] <= -c.theta;
        r.violations += ok ? 0 : 1;
      }
      r.samples += y.size();
      r.sdr_in += signal::sdr(x, y) / 20.0;
      r.sdr_out += signal::sdr(x, out) / 20.0;
      r.estoi_in += metrics::estoi(x, y) / 20.0;
      r.estoi_out += metrics::estoi(x, out) / 20.0;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }();
  return run;
}

Outcome consistency() {
  const auto& r = cons_iht_run();
  return {r.violations == 0, std::to_string(r.violations) + " violations over " +
                                 std::to_string(r.samples) + " output samples (20 utterances, 3.5 dB)"};
}

Outcome directional() {
  const auto& r = cons_iht_run();
  const double gain = r.sdr_out - r.sdr_in;
  const bool ok = gain >= 1.0 && r.estoi_out >= r.estoi_in && r.seconds < 300.0;
  return {ok, "mean SDR " + fmt("%.3f", r.sdr_in) + " -> " + fmt("%.3f", r.sdr_out) + " dB (gain " +
                  fmt("%.3f", gain) + " >= 1), mean ESTOI " + fmt("%.4f", r.estoi_in) + " -> " +
                  fmt("%.4f", r.estoi_out) + ", declip+score " + fmt("%.0f", r.seconds) +
                  " s (< 300)"};
}

Outcome metric_identities() {
  double llr_worst = 0.0, estoi_worst = 0.0;
  std::size_t max_inversions = 0;
  for (std::uint64_t u = 0; u < 20; ++u) {
    const auto x = utterance(200 + u);
    llr_worst = std::max(llr_worst, std::abs(metrics::llr(x, x)));
    estoi_worst = std::max(estoi_worst, std::abs(metrics::estoi(x, x) - 1.0));
    std::size_t inversions = 0;
    double prev = -2.0;
    for (double g : kTestGrid) {
      const auto c = harness::clip_to_sdr(x, g);
      const double v = metrics::estoi(x, c.samples);
      if (v < prev) ++inversions;
      prev = v;
    }
    max_inversions = std::max(max_inversions, inversions);
  }
  const bool ok = llr_worst == 0.0 && estoi_worst <= 1e-6 && max_inversions <= 1;
  return {ok, "max |llr(x,x)| " + fmt("%.3g", llr_worst) + ", max |estoi(x,x)-1| " +
                  fmt("%.3g", estoi_worst) + " (<= 1e-6), worst ESTOI inversions per utterance " +
                  std::to_string(max_inversions) + " (<= 1)"};
}

struct SmokeRun {
  std::string reports_csv;
  std::string estoi_csv;
  std::string loss_csv;
  double unet_estoi = 0.0;
  double pass_estoi = 0.0;
  bool completed = false;
  std::string error;
};

SmokeRun smoke_once(const fs::path& dir) {
  SmokeRun s;
  try {
    fs::remove_all(dir);
    harness::PrepareOptions po;
    po.synthetic_count = 10;
    po.all_grids = true;
    po.out_dir = dir / "data";
    const auto manifest = harness::prepare_dataset(po).manifest;

    harness::TrainCommandOptions to;
    to.train.epochs = 5;
    to.checkpoint = dir / "unet.ckpt";
    to.loss_csv = dir / "loss.csv";
    harness::train_command(manifest, to);

    const std::vector<double> heavy{0.5, 1.5};
    for (auto m : {harness::Method::kPassthrough, harness::Method::kUnet}) {
      harness::DeclipOptions d;
      d.method.method = m;
      d.method.checkpoint = to.checkpoint;
      d.out_dir = dir / "out";
      d.split = harness::Split::kTrain;
      d.sdrs = heavy;
      const auto log = harness::run_declip(manifest, d);
      if (!log.failures.empty()) throw std::runtime_error(log.failures.front());
    }
    harness::EvaluateOptions eo;
    eo.methods = {"passthrough", "unet"};
    eo.processed_dir = dir / "out";
    eo.split = harness::Split::kTrain;
    eo.sdrs = heavy;
    const auto ev = harness::evaluate_run(manifest, eo);
    if (!ev.failures.empty()) throw std::runtime_error(ev.failures.front());
    harness::write_evaluation(ev, dir / "report");

    s.reports_csv = slurp(dir / "report" / "reports.csv");
    s.estoi_csv = slurp(dir / "report" / "estoi.csv");
    s.loss_csv = slurp(to.loss_csv);
    const auto& t = ev.tables[2];
    s.pass_estoi = *t.average[0];
    s.unet_estoi = *t.average[1];
    s.completed = true;
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  return s;
}

Outcome unet_smoke(const fs::path& work) {
  const auto a = smoke_once(work / "smoke_a");
  const auto b = smoke_once(work / "smoke_b");
  if (!a.completed || !b.completed) return {false, "pipeline failed: " + a.error + b.error};
  const bool same = a.reports_csv == b.reports_csv && a.estoi_csv == b.estoi_csv &&
                    a.loss_csv == b.loss_csv;
  const bool better = a.unet_estoi > a.pass_estoi;
  return {same && better, std::string(same ? "two runs identical" : "runs DIFFER") +
                              "; ESTOI at 0.5/1.5 dB on train utterances: unet " +
                              fmt("%.4f", a.unet_estoi) + " vs passthrough " +
                              fmt("%.4f", a.pass_estoi)};
}

Outcome noise_sweep_degenerate(const fs::path& work) {
  const fs::path dir = work / "sweep";
  fs::remove_all(dir);
  harness::PrepareOptions po;
  po.synthetic_count = 10;
  po.seed = 5;
  po.out_dir = dir / "data";
  const auto manifest = harness::prepare_dataset(po).manifest;

  std::vector<harness::MethodConfig> methods(2);
  methods[1].method = harness::Method::kConsistentIht;
  std::vector<std::string> names;
  for (const auto& m : methods) {
    harness::DeclipOptions d;
    d.method = m;
    d.out_dir = dir / "out";
    d.sdrs = {3.5};
    harness::run_declip(manifest, d);
    names.push_back(harness::to_string(m.method));
  }
  harness::EvaluateOptions eo;
  eo.methods = names;
  eo.processed_dir = dir / "out";
  eo.sdrs = {3.5};
  const auto plain = harness::evaluate_run(manifest, eo);

  harness::NoiseSweepOptions so;
  so.methods = methods;
  so.sigma2 = {0.0, 0.01};
  const auto sweep = harness::noise_sweep(manifest, so);

  std::size_t compared = 0, mismatched = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t r = 0; r < names.size(); ++r) {
      ++compared;
      const auto& p = plain.tables[t].cells[r][0];
      const auto& s = sweep.tables[t].cells[r][0];
      if (!p || !s || *p != *s) ++mismatched;
    }
  }
  return {mismatched == 0 && plain.failures.empty() && sweep.failures.empty(),
          std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
              " (metric, method) cells bit-identical between sigma2=0 and the 3.5 dB table"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Acceptance criteria");
  fs::path work = fs::temp_directory_path() / "declip_acceptance";
  std::vector<int> only;
  app.add_option("--workdir", work, "Scratch directory");
  app.add_option("--only", only, "Run only these criteria (1-based)");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<Criterion> criteria{
      {"STFT/ISTFT perfect reconstruction", 10.0, stft_round_trip},
      {"Threshold solver accuracy", 30.0, threshold_solver},
      {"Gradient correctness", 120.0, gradients},
      {"Overfit oracle", 600.0, overfit},
      {"Sparse exact recovery", 60.0, sparse_recovery},
      {"Consistent-IHT constraint set", 0.0, consistency},
      {"Directional declipping", 0.0, directional},
      {"Metric identities and ESTOI ordering", 0.0, metric_identities},
      {"U-Net pipeline smoke", 0.0, [&] { return unet_smoke(work); }},
      {"Noise sweep degenerate point", 0.0, [&] { return noise_sweep_degenerate(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) {
      continue;
    }
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" (< %.0f s)", c.budget_s);
      if (secs >= c.budget_s) o.pass = false;
    }
    std::printf("[%s] %2zu %s: %s; %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name.c_str(),
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
