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

// declip_lab: dataset preparation, training, declipping, evaluation, noise
// sweeps and spectrogram export.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_config.hpp"

#include "declip/error.hpp"
#include "declip/harness/experiment.hpp"
#include "declip/harness/spectrogram.hpp"
#include "declip/neural/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace declip;
using namespace declip::harness;

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kDataError = 2, kPartialFailure = 3 };

std::optional<Split> split_arg(const std::string& s) {
  if (s == "all") return std::nullopt;
  return parse_split(s);
}

struct SparseArgs {
  std::size_t frame_len = 512;
  std::size_t atoms = 0;
  std::size_t k_max = 0;
  std::size_t max_iters = 50;
  double tolerance = 1e-3;
  double stall = 1e-4;

  void add(CLI::App* app) {
    app->add_option("--frame-len", frame_len, "Sparse frame length");
    app->add_option("--atoms", atoms, "Dictionary size (default 2x frame length)");
    app->add_option("--k-max", k_max, "Largest sparsity (default frame length / 8)");
    app->add_option("--max-iters", max_iters, "Iterations per sparsity level");
    app->add_option("--tolerance", tolerance, "Relative residual stopping tolerance");
    app->add_option("--stall", stall, "Relative improvement that advances k early");
  }

  sparse::SparseSolverConfig config() const {
    auto c = sparse::SparseSolverConfig::for_frame_len(frame_len);
    if (atoms) c.n_atoms = atoms;
    if (k_max) c.k_max = k_max;
    c.max_iters = max_iters;
    c.tolerance = tolerance;
    c.stall_tolerance = stall;
    return c;
  }
};

MethodConfig method_config(const std::string& name, const SparseArgs& sparse,
                           const std::string& checkpoint) {
  MethodConfig m;
  m.method = parse_method(name);
  m.sparse = sparse.config();
  m.checkpoint = checkpoint;
  return m;
}

void print_tables(const Evaluation& ev) {
  for (const auto& t : ev.tables) std::cout << to_text(t) << '\n';
  for (const auto& f : ev.failures) std::cerr << "failed: " << f << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech declipping lab: sparse and U-Net declippers with SDR/LLR/ESTOI evaluation"};
  app.config_formatter(std::make_shared<tools::JsonConfig>());
  app.set_config("--config", "", "JSON config; command-line flags take precedence");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  // prepare
  PrepareOptions prep;
  auto* prepare = app.add_subcommand("prepare", "Clip a corpus at the train/test SDR grids");
  prepare->add_option("--corpus", prep.corpus_dir, "Directory of mono 16-bit WAVs");
  prepare->add_option("--synthetic", prep.synthetic_count, "Generate N synthetic utterances");
  prepare->add_option("--duration", prep.synthetic.duration_s, "Synthetic utterance length (s)");
  prepare->add_option("--out", prep.out_dir, "Dataset directory")->required();
  prepare->add_option("--seed", prep.seed, "Seed for synthesis and splits");
  prepare->add_option("--train-grid", prep.grids.train, "Training SDRs (dB)");
  prepare->add_option("--test-grid", prep.grids.test, "Test SDRs (dB)");
  prepare->add_flag("--all-grids", prep.all_grids, "Clip every utterance at both grids");

  // train
  std::string manifest_path;
  TrainCommandOptions tr;
  bool no_mask = false;
  auto* train = app.add_subcommand("train", "Train the U-Net on the train split");
  train->add_option("--manifest", manifest_path, "manifest.json from prepare")->required();
  train->add_option("--checkpoint", tr.checkpoint, "Output checkpoint")->required();
  train->add_option("--loss-csv", tr.loss_csv, "Per-epoch loss CSV");
  train->add_option("--epochs", tr.train.epochs, "Epochs");
  train->add_option("--batch-size", tr.train.batch_size, "Mini-batch size");
  train->add_option("--lr", tr.train.learning_rate, "Adam learning rate");
  train->add_option("--seed", tr.train.seed, "Initialisation and shuffling seed");
  train->add_option("--depth", tr.unet.depth, "Contraction levels");
  train->add_option("--base-filters", tr.unet.base_filters, "Filters at the first level");
  train->add_option("--image-size", tr.unet.image_size, "Spectrum image side");
  train->add_flag("--no-loss-mask", no_mask, "Include padded rows in the loss");

  // declip
  std::string method_name = "consistent_iht", checkpoint, split_name = "test";
  std::vector<double> sdrs;
  SparseArgs sparse_args;
  fs::path out_dir;
  auto* declip_cmd = app.add_subcommand("declip", "Run a declipper over manifest entries");
  declip_cmd->add_option("--manifest", manifest_path, "manifest.json")->required();
  declip_cmd->add_option("--method", method_name, "passthrough, iht, consistent_iht or unet");
  declip_cmd->add_option("--checkpoint", checkpoint, "U-Net checkpoint");
  declip_cmd->add_option("--out", out_dir, "Output root")->required();
  declip_cmd->add_option("--split", split_name, "train, dev, test or all");
  declip_cmd->add_option("--sdr", sdrs, "Restrict to these clipping SDRs");
  sparse_args.add(declip_cmd);

  // evaluate
  std::vector<std::string> methods{"passthrough"};
  fs::path processed, report_dir;
  auto* evaluate = app.add_subcommand("evaluate", "Score declipped outputs against clean speech");
  evaluate->add_option("--manifest", manifest_path, "manifest.json")->required();
  evaluate->add_option("--processed", processed, "Output root given to declip")->required();
  evaluate->add_option("--methods", methods, "Methods to tabulate");
  evaluate->add_option("--split", split_name, "train, dev, test or all");
  evaluate->add_option("--sdr", sdrs, "Table columns (default: test grid)");
  evaluate->add_option("--out", report_dir, "Directory for CSV and text tables");

  // noise-sweep
  NoiseSweepOptions sweep;
  auto* noise = app.add_subcommand("noise-sweep", "Additive-noise sweep at a fixed clipping SDR");
  noise->add_option("--manifest", manifest_path, "manifest.json")->required();
  noise->add_option("--methods", methods, "Methods to run");
  noise->add_option("--checkpoint", checkpoint, "U-Net checkpoint");
  noise->add_option("--sigma2", sweep.sigma2, "Noise variances");
  noise->add_option("--clip-sdr", sweep.clip_sdr_db, "Clipping SDR of the noisy signal (dB)");
  noise->add_option("--split", split_name, "train, dev, test or all");
  noise->add_option("--seed", sweep.seed, "Noise seed");
  noise->add_option("--out", report_dir, "Directory for CSV and text tables");
  sparse_args.add(noise);

  // spectrogram
  fs::path wav, image_out;
  std::string format = "pgm";
  std::size_t fft = 0, frame_len = 0, shift = 0;
  auto* spec = app.add_subcommand("spectrogram", "Export a log-magnitude spectrogram");
  spec->add_option("--wav", wav, "Input WAV")->required();
  spec->add_option("--out", image_out, "Output file")->required();
  spec->add_option("--format", format, "pgm or csv");
  spec->add_option("--fft", fft, "FFT size");
  spec->add_option("--frame-len", frame_len, "Frame length");
  spec->add_option("--shift", shift, "Frame shift");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (threads > 0) setenv("DECLIP_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (*prepare) {
      if ((prep.synthetic_count > 0) == !prep.corpus_dir.empty()) {
        throw InvalidArgument("prepare needs exactly one of --corpus or --synthetic");
      }
      const auto r = prepare_dataset(prep);
      const auto& m = r.manifest;
      std::cout << "prepared " << m.entries.size() << " clipped files ("
                << m.select(Split::kTrain).size() << " train, " << m.select(Split::kDev).size()
                << " dev, " << m.select(Split::kTest).size() << " test) -> "
                << (prep.out_dir / "manifest.json").string() << '\n';
      for (const auto& s : r.skipped) std::cerr << "skipped: " << s << '\n';
      return r.skipped.empty() ? kOk : kPartialFailure;
    }

    if (*train) {
      tr.train.use_loss_mask = !no_mask;
      const auto manifest = load_manifest(manifest_path);
      const auto r = train_command(manifest, tr);
      for (std::size_t i = 0; i < r.epoch_loss.size(); ++i) {
        std::cout << "epoch " << i + 1 << " loss " << r.epoch_loss[i] << '\n';
      }
      std::cout << "checkpoint -> " << tr.checkpoint.string() << '\n';
      return kOk;
    }

    if (*declip_cmd) {
      const auto manifest = load_manifest(manifest_path);
      DeclipOptions o;
      o.method = method_config(method_name, sparse_args, checkpoint);
      if (o.method.method == Method::kUnet && !fs::exists(o.method.checkpoint)) {
        throw InvalidArgument("checkpoint not found: " + checkpoint);
      }
      o.out_dir = out_dir;
      o.split = split_arg(split_name);
      o.sdrs = sdrs;
      const auto log = run_declip(manifest, o);
      std::cout << to_string(o.method.method) << ": " << log.produced.size() << " outputs, "
                << log.failures.size() << " failures\n";
      for (const auto& f : log.failures) std::cerr << "failed: " << f << '\n';
      return log.failures.empty() ? kOk : kPartialFailure;
    }

    if (*evaluate) {
      const auto manifest = load_manifest(manifest_path);
      EvaluateOptions o;
      o.methods.clear();
      for (const auto& m : methods) o.methods.push_back(to_string(parse_method(m)));
      o.processed_dir = processed;
      o.split = split_arg(split_name);
      o.sdrs = sdrs;
      const auto ev = evaluate_run(manifest, o);
      print_tables(ev);
      if (!report_dir.empty()) write_evaluation(ev, report_dir);
      return ev.failures.empty() ? kOk : kPartialFailure;
    }

    if (*noise) {
      const auto manifest = load_manifest(manifest_path);
      for (const auto& m : methods) sweep.methods.push_back(method_config(m, sparse_args, checkpoint));
      sweep.split = split_arg(split_name);
      const auto ev = noise_sweep(manifest, sweep);
      print_tables(ev);
      if (!report_dir.empty()) write_evaluation(ev, report_dir);
      return ev.failures.empty() ? kOk : kPartialFailure;
    }

    if (*spec) {
      std::optional<signal::StftConfig> cfg;
      if (fft || frame_len || shift) {
        signal::StftConfig c;
        if (fft) c.fft_size = fft;
        c.frame_len = frame_len ? frame_len : c.fft_size;
        c.frame_shift = shift ? shift : c.frame_len / 4;
        c.validate();
        cfg = c;
      }
      const auto m = export_spectrogram(wav, image_out, parse_spectrogram_format(format), cfg);
      std::cout << m.frames << " frames x " << m.bins << " bins -> " << image_out.string() << '\n';
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nn::ConfigMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}
