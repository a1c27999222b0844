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

#ifndef DECLIP_HARNESS_EXPERIMENT_HPP_
#define DECLIP_HARNESS_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "declip/harness/manifest.hpp"
#include "declip/harness/methods.hpp"
#include "declip/harness/results_table.hpp"
#include "declip/harness/synthetic.hpp"
#include "declip/metrics/report.hpp"
#include "declip/neural/trainer.hpp"
#include "declip/neural/unet.hpp"
#include "declip/signal/waveform.hpp"

namespace declip::harness {

struct Grids {
  std::vector<double> train{1.0, 2.0, 5.0, 10.0, 15.0, 20.0};
  std::vector<double> test{0.5, 1.5, 3.5, 7.5, 12.5, 17.5};

  void validate() const;
};

inline const std::vector<double> kDefaultNoiseGrid{0.0, 0.001, 0.005, 0.01, 0.05, 0.1};
inline constexpr double kNoiseSweepSdrDb = 3.5;

// Clipping at a target SDR with the threshold snapped to the 16-bit grid, so
// that writing and re-reading the clipped signal is lossless.
struct ClippedSignal {
  signal::Waveform samples;
  double theta = 0.0;
  double realized_sdr_db = 0.0;
};

// x is expected to lie on the 16-bit grid. Throws UnattainableTarget when no
// grid threshold lands within the solver tolerance.
ClippedSignal clip_to_sdr(const signal::Waveform& x, double target_sdr_db);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

struct PrepareOptions {
  // Either a directory of mono 16-bit WAVs (one level of speaker
  // subdirectories allowed) or synthetic_count > 0.
  std::filesystem::path corpus_dir;
  std::size_t synthetic_count = 0;
  SyntheticSpeechOptions synthetic;
  Grids grids;
  std::uint64_t seed = 1;
  // Train utterances are clipped at the train grid and dev/test utterances
  // at the test grid; with all_grids every utterance gets both.
  bool all_grids = false;
  std::filesystem::path out_dir;
};

struct PrepareResult {
  DatasetManifest manifest;
  std::vector<std::string> skipped;
};

// Writes clean/<utt>.wav, clipped/<sdr>/<utt>.wav and manifest.json.
PrepareResult prepare_dataset(const PrepareOptions& options);

// Entries filtered by split and target SDR (empty list = any SDR).
std::vector<const ManifestEntry*> select_entries(const DatasetManifest& manifest,
                                                 std::optional<Split> split,
                                                 const std::vector<double>& sdrs);

struct DeclipOptions {
  MethodConfig method;
  std::filesystem::path out_dir;
  std::optional<Split> split = Split::kTest;
  std::vector<double> sdrs;
};

struct RunLog {
  std::vector<std::string> produced;
  std::vector<std::string> failures;
};

// Output for an entry: <out_dir>/<method>/<clipped path>.
std::filesystem::path output_path(const std::filesystem::path& out_dir, const std::string& method,
                                  const ManifestEntry& entry);

// Also writes <out_dir>/<method>/run_log.txt.
RunLog run_declip(const DatasetManifest& manifest, const DeclipOptions& options);

struct EvaluateOptions {
  std::vector<std::string> methods;
  std::filesystem::path processed_dir;
  std::optional<Split> split = Split::kTest;
  // Table columns; empty means the manifest's test grid.
  std::vector<double> sdrs;
};

struct Evaluation {
  std::vector<metrics::MetricReport> reports;
  std::vector<std::string> failures;
  // One per metric: SDR, LLR, ESTOI.
  std::vector<ResultsTable> tables;
};

Evaluation evaluate_run(const DatasetManifest& manifest, const EvaluateOptions& options);

// reports.csv plus <metric>.txt / <metric>.csv per table.
void write_evaluation(const Evaluation& evaluation, const std::filesystem::path& dir);

struct NoiseSweepOptions {
  std::vector<MethodConfig> methods;
  std::vector<double> sigma2 = kDefaultNoiseGrid;
  double clip_sdr_db = kNoiseSweepSdrDb;
  std::optional<Split> split = Split::kTest;
  std::uint64_t seed = 1;
};

Evaluation noise_sweep(const DatasetManifest& manifest, const NoiseSweepOptions& options);

std::vector<nn::ImagePair> build_training_pairs(const DatasetManifest& manifest,
                                                const nn::UNetConfig& config);

struct TrainCommandOptions {
  nn::UNetConfig unet = nn::UNetConfig::desk();
  nn::TrainConfig train;
  std::filesystem::path checkpoint;
  // "epoch,loss" with one row per epoch.
  std::filesystem::path loss_csv;
};

nn::TrainResult train_command(const DatasetManifest& manifest, const TrainCommandOptions& options);

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_EXPERIMENT_HPP_
