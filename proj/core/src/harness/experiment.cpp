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

#include "declip/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "declip/error.hpp"
#include "declip/neural/checkpoint.hpp"
#include "declip/parallel.hpp"
#include "declip/signal/clipping.hpp"
#include "declip/signal/spectrum_image.hpp"
#include "declip/signal/stft.hpp"
#include "declip/signal/wav_io.hpp"

namespace declip::harness {
namespace fs = std::filesystem;
namespace {

constexpr double kPcmStep = 1.0 / 32768.0;

std::string sdr_dir(double sdr_db) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", sdr_db);
  return buf;
}

bool contains(const std::vector<double>& grid, double v) {
  return std::find(grid.begin(), grid.end(), v) != grid.end();
}

struct CorpusItem {
  std::string utterance_id;
  std::string speaker;
  signal::Waveform clean;
};

std::vector<fs::path> list_wavs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Unreadable files are dropped and named in skipped.
std::vector<CorpusItem> load_corpus(const PrepareOptions& o, std::vector<std::string>& skipped) {
  std::vector<CorpusItem> items;
  if (o.synthetic_count > 0) {
    items.resize(o.synthetic_count);
    parallel_for(o.synthetic_count, [&](std::size_t i) {
      char id[32];
      std::snprintf(id, sizeof id, "syn%04zu", i);
      items[i].utterance_id = id;
      items[i].clean =
          signal::quantize_pcm16(synthesize_speech(derive_seed(o.seed, 0x5e, i), o.synthetic));
    });
    return items;
  }
  if (o.corpus_dir.empty() || !fs::is_directory(o.corpus_dir)) {
    throw IoError("corpus directory not readable: " + o.corpus_dir.string());
  }
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& p : list_wavs(o.corpus_dir)) files.emplace_back("", p);
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(o.corpus_dir)) {
    if (e.is_directory()) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& d : subdirs) {
    for (const auto& p : list_wavs(d)) files.emplace_back(d.filename().string(), p);
  }
  if (files.empty()) throw IoError("no .wav files under " + o.corpus_dir.string());
  items.resize(files.size());
  std::vector<std::string> errors(files.size());
  parallel_for(files.size(), [&](std::size_t i) {
    const auto& [speaker, path] = files[i];
    items[i].speaker = speaker;
    items[i].utterance_id =
        speaker.empty() ? path.stem().string() : speaker + "_" + path.stem().string();
    try {
      items[i].clean = signal::read_wav(path);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  std::vector<CorpusItem> readable;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i].empty()) {
      readable.push_back(std::move(items[i]));
    } else {
      skipped.push_back(errors[i]);
    }
  }
  items = std::move(readable);
  if (items.empty()) throw IoError("no readable .wav files under " + o.corpus_dir.string());
  const int rate = items.front().clean.sample_rate();
  for (const auto& it : items) {
    if (it.clean.sample_rate() != rate) {
      throw FormatError("mixed sample rates in corpus (" + std::to_string(rate) + " vs " +
                        std::to_string(it.clean.sample_rate()) + ")");
    }
  }
  return items;
}

// Speaker-disjoint when at least three speakers are labelled, otherwise
// utterance-disjoint.
std::vector<Split> assign_splits(const std::vector<CorpusItem>& items, std::uint64_t seed) {
  std::vector<std::string> units;
  std::set<std::string> speakers;
  for (const auto& it : items) {
    if (!it.speaker.empty()) speakers.insert(it.speaker);
  }
  const bool by_speaker = speakers.size() >= 3 && std::none_of(items.begin(), items.end(), [](const auto& it) {
    return it.speaker.empty();
  });
  if (by_speaker) {
    units.assign(speakers.begin(), speakers.end());
  } else {
    for (const auto& it : items) units.push_back(it.utterance_id);
  }
  std::vector<std::size_t> order(units.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(derive_seed(seed, 0x51));
  std::shuffle(order.begin(), order.end(), rng);

  const auto n = static_cast<double>(units.size());
  const auto n_test = static_cast<std::size_t>(std::lround(0.15 * n));
  const auto n_dev = static_cast<std::size_t>(std::lround(0.10 * n));
  std::map<std::string, Split> unit_split;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const Split s = r < n_test ? Split::kTest : r < n_test + n_dev ? Split::kDev : Split::kTrain;
    unit_split[units[order[r]]] = s;
  }
  std::vector<Split> out;
  for (const auto& it : items) out.push_back(unit_split.at(by_speaker ? it.speaker : it.utterance_id));
  return out;
}

}  // namespace

void Grids::validate() const {
  if (train.empty() || test.empty()) throw InvalidArgument("SDR grids must be non-empty");
  for (const auto* g : {&train, &test}) {
    for (double v : *g) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("SDR grid values must be positive, got " + std::to_string(v));
      }
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 over the three words.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

ClippedSignal clip_to_sdr(const signal::Waveform& x, double target_sdr_db) {
  const signal::ThresholdSolverOptions opts;
  const double theta = signal::solve_threshold_for_sdr(x, target_sdr_db, opts);
  const double snapped = signal::quantize_pcm16(theta);
  std::optional<ClippedSignal> best;
  for (int k = 0; k <= 8; ++k) {
    for (int sign : {1, -1}) {
      if (k == 0 && sign < 0) continue;
      const double t = snapped + sign * k * kPcmStep;
      if (t <= 0.0) continue;
      auto y = signal::clip(x, t);
      const double realized = signal::sdr(x, y);
      if (!best || std::abs(realized - target_sdr_db) < std::abs(best->realized_sdr_db - target_sdr_db)) {
        best = ClippedSignal{std::move(y), t, realized};
      }
    }
    if (best && std::abs(best->realized_sdr_db - target_sdr_db) <= opts.tolerance_db) return *best;
  }
  throw UnattainableTarget("no 16-bit threshold reaches " + std::to_string(target_sdr_db) +
                           " dB within tolerance");
}

PrepareResult prepare_dataset(const PrepareOptions& o) {
  o.grids.validate();
  if (o.out_dir.empty()) throw InvalidArgument("prepare: output directory required");
  PrepareResult r;
  const auto items = load_corpus(o, r.skipped);
  const auto splits = assign_splits(items, o.seed);

  fs::create_directories(o.out_dir / "clean");
  std::set<double> all;
  all.insert(o.grids.train.begin(), o.grids.train.end());
  all.insert(o.grids.test.begin(), o.grids.test.end());
  for (double s : all) fs::create_directories(o.out_dir / "clipped" / sdr_dir(s));

  std::vector<std::vector<ManifestEntry>> per_item(items.size());
  std::vector<std::vector<std::string>> per_item_skips(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    const auto& it = items[i];
    const std::string clean_rel = "clean/" + it.utterance_id + ".wav";
    signal::write_wav(o.out_dir / clean_rel, it.clean);
    std::vector<double> grid;
    if (splits[i] == Split::kTrain || o.all_grids) {
      grid.insert(grid.end(), o.grids.train.begin(), o.grids.train.end());
    }
    if (splits[i] != Split::kTrain || o.all_grids) {
      for (double s : o.grids.test) {
        if (!contains(grid, s)) grid.push_back(s);
      }
    }
    for (double target : grid) {
      try {
        const auto c = clip_to_sdr(it.clean, target);
        const std::string rel = "clipped/" + sdr_dir(target) + "/" + it.utterance_id + ".wav";
        signal::write_wav(o.out_dir / rel, c.samples);
        per_item[i].push_back(ManifestEntry{it.utterance_id, it.speaker, clean_rel, rel, target,
                                            c.theta, c.realized_sdr_db, splits[i]});
      } catch (const UnattainableTarget& e) {
        per_item_skips[i].push_back(it.utterance_id + " @ " + sdr_dir(target) + " dB: " + e.what());
      }
    }
  });

  r.manifest.corpus = o.synthetic_count > 0 ? "synthetic:" + std::to_string(o.synthetic_count)
                                            : o.corpus_dir.string();
  r.manifest.seed = o.seed;
  r.manifest.sample_rate = items.front().clean.sample_rate();
  r.manifest.train_grid = o.grids.train;
  r.manifest.test_grid = o.grids.test;
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (auto& e : per_item[i]) r.manifest.entries.push_back(std::move(e));
    for (auto& s : per_item_skips[i]) r.skipped.push_back(std::move(s));
  }
  save_manifest(r.manifest, o.out_dir / "manifest.json");
  return r;
}

std::vector<const ManifestEntry*> select_entries(const DatasetManifest& manifest,
                                                 std::optional<Split> split,
                                                 const std::vector<double>& sdrs) {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : manifest.entries) {
    if (split && e.split != *split) continue;
    if (!sdrs.empty() && !contains(sdrs, e.target_sdr_db)) continue;
    out.push_back(&e);
  }
  return out;
}

fs::path output_path(const fs::path& out_dir, const std::string& method,
                     const ManifestEntry& entry) {
  return out_dir / method / entry.clipped_path;
}

RunLog run_declip(const DatasetManifest& manifest, const DeclipOptions& o) {
  if (o.out_dir.empty()) throw InvalidArgument("declip: output directory required");
  const auto declipper = make_declipper(o.method);
  const std::string name = to_string(o.method.method);
  const auto entries = select_entries(manifest, o.split, o.sdrs);

  std::vector<std::string> status(entries.size());
  std::vector<char> ok(entries.size(), 0);
  parallel_for(entries.size(), [&](std::size_t i) {
    const auto& e = *entries[i];
    const fs::path out = output_path(o.out_dir, name, e);
    try {
      fs::create_directories(out.parent_path());
      const fs::path in = manifest.resolve(e.clipped_path);
      if (o.method.method == Method::kPassthrough) {
        if (!fs::exists(in)) throw IoError("missing " + in.string());
        fs::copy_file(in, out, fs::copy_options::overwrite_existing);
      } else {
        signal::write_wav(out, declipper->run(signal::read_wav(in), e.theta));
      }
      status[i] = out.string();
      ok[i] = 1;
    } catch (const std::exception& ex) {
      status[i] = e.utterance_id + " @ " + sdr_dir(e.target_sdr_db) + " dB: " + ex.what();
    }
  });

  RunLog log;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    (ok[i] ? log.produced : log.failures).push_back(status[i]);
  }
  fs::create_directories(o.out_dir / name);
  std::ofstream f(o.out_dir / name / "run_log.txt", std::ios::trunc);
  for (const auto& p : log.produced) f << "ok " << p << '\n';
  for (const auto& p : log.failures) f << "fail " << p << '\n';
  return log;
}

namespace {

std::vector<ResultsTable> make_tables(const std::vector<metrics::MetricReport>& reports,
                                      ColumnKey key, const std::vector<double>& columns,
                                      const std::vector<std::string>& methods) {
  std::vector<ResultsTable> tables;
  for (Metric m : {Metric::kSdr, Metric::kLlr, Metric::kEstoi}) {
    tables.push_back(aggregate(reports, m, key, columns, methods));
  }
  return tables;
}

void collect_failures(Evaluation& ev) {
  for (const auto& r : ev.reports) {
    for (const auto& f : r.failures) {
      ev.failures.push_back(r.method + " " + r.utterance_id + " @ " +
                            sdr_dir(r.clip_sdr_db) + " dB / sigma2 " + sdr_dir(r.noise_sigma2) +
                            ": " + f);
    }
  }
}

}  // namespace

Evaluation evaluate_run(const DatasetManifest& manifest, const EvaluateOptions& o) {
  if (o.methods.empty()) throw InvalidArgument("evaluate: no methods given");
  const auto columns = o.sdrs.empty() ? manifest.test_grid : o.sdrs;
  const auto entries = select_entries(manifest, o.split, columns);
  const std::size_t nm = o.methods.size();

  Evaluation ev;
  ev.reports.resize(entries.size() * nm);
  parallel_for(entries.size(), [&](std::size_t i) {
    const auto& e = *entries[i];
    std::optional<signal::Waveform> clean;
    std::string clean_error;
    try {
      clean = signal::read_wav(manifest.resolve(e.clean_path));
    } catch (const std::exception& ex) {
      clean_error = ex.what();
    }
    for (std::size_t m = 0; m < nm; ++m) {
      auto& r = ev.reports[i * nm + m];
      try {
        if (!clean) throw IoError(clean_error);
        const fs::path p = output_path(o.processed_dir, o.methods[m], e);
        if (!fs::exists(p)) throw IoError("missing " + p.string());
        r = metrics::evaluate(*clean, signal::read_wav(p));
      } catch (const std::exception& ex) {
        r = metrics::MetricReport{};
        r.failures.push_back(ex.what());
      }
      r.utterance_id = e.utterance_id;
      r.method = o.methods[m];
      r.clip_sdr_db = e.target_sdr_db;
      r.noise_sigma2 = 0.0;
    }
  });
  collect_failures(ev);
  ev.tables = make_tables(ev.reports, ColumnKey::kClipSdr, columns, o.methods);
  return ev;
}

void write_evaluation(const Evaluation& ev, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "reports.csv", std::ios::trunc);
    if (!f) throw IoError("cannot write " + (dir / "reports.csv").string());
    f << metrics::csv_header() << '\n';
    for (const auto& r : ev.reports) f << metrics::to_csv_row(r) << '\n';
  }
  for (const auto& t : ev.tables) {
    const std::string stem = to_string(t.metric);
    std::ofstream(dir / (stem + ".txt"), std::ios::trunc) << to_text(t);
    std::ofstream(dir / (stem + ".csv"), std::ios::trunc) << to_csv(t);
  }
  if (!ev.failures.empty()) {
    std::ofstream f(dir / "failures.txt", std::ios::trunc);
    for (const auto& s : ev.failures) f << s << '\n';
  }
}

Evaluation noise_sweep(const DatasetManifest& manifest, const NoiseSweepOptions& o) {
  if (o.methods.empty()) throw InvalidArgument("noise sweep: no methods given");
  if (o.sigma2.empty()) throw InvalidArgument("noise sweep: empty noise grid");
  for (double s : o.sigma2) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("noise variance must be >= 0");
  }
  std::vector<std::unique_ptr<Declipper>> declippers;
  std::vector<std::string> names;
  for (const auto& m : o.methods) {
    declippers.push_back(make_declipper(m));
    names.push_back(to_string(m.method));
  }

  std::vector<const ManifestEntry*> utterances;
  std::set<std::string> seen;
  for (const auto* e : select_entries(manifest, o.split, {})) {
    if (seen.insert(e->clean_path).second) utterances.push_back(e);
  }

  const std::size_t ns = o.sigma2.size(), nm = names.size();
  Evaluation ev;
  ev.reports.resize(utterances.size() * ns * nm);
  parallel_for(utterances.size() * ns, [&](std::size_t job) {
    const std::size_t u = job / ns, s = job % ns;
    const auto& e = *utterances[u];
    auto* slot = &ev.reports[job * nm];
    for (std::size_t m = 0; m < nm; ++m) {
      slot[m].utterance_id = e.utterance_id;
      slot[m].method = names[m];
      slot[m].clip_sdr_db = o.clip_sdr_db;
      slot[m].noise_sigma2 = o.sigma2[s];
    }
    try {
      const auto clean = signal::read_wav(manifest.resolve(e.clean_path));
      const auto noisy = signal::quantize_pcm16(
          signal::add_gaussian_noise(clean, o.sigma2[s], derive_seed(o.seed, u, s)));
      const auto clipped = clip_to_sdr(noisy, o.clip_sdr_db);
      for (std::size_t m = 0; m < nm; ++m) {
        try {
          const auto out = signal::quantize_pcm16(declippers[m]->run(clipped.samples, clipped.theta));
          auto r = metrics::evaluate(clean, out);
          r.utterance_id = slot[m].utterance_id;
          r.method = slot[m].method;
          r.clip_sdr_db = slot[m].clip_sdr_db;
          r.noise_sigma2 = slot[m].noise_sigma2;
          slot[m] = std::move(r);
        } catch (const std::exception& ex) {
          slot[m].failures.push_back(ex.what());
        }
      }
    } catch (const std::exception& ex) {
      for (std::size_t m = 0; m < nm; ++m) slot[m].failures.push_back(ex.what());
    }
  });
  collect_failures(ev);
  ev.tables = make_tables(ev.reports, ColumnKey::kNoiseSigma2, o.sigma2, names);
  return ev;
}

std::vector<nn::ImagePair> build_training_pairs(const DatasetManifest& manifest,
                                                const nn::UNetConfig& config) {
  const auto entries = select_entries(manifest, Split::kTrain, manifest.train_grid);
  if (entries.empty()) throw InsufficientData("manifest has no train entries at the train grid");
  const auto stft_cfg = stft_for_unet(config);

  std::vector<std::vector<nn::ImagePair>> per_entry(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    const auto& e = *entries[i];
    const auto clean = signal::read_wav(manifest.resolve(e.clean_path));
    const auto clipped = signal::read_wav(manifest.resolve(e.clipped_path));
    auto targets = signal::extract_images(signal::stft(clean, stft_cfg), false);
    auto inputs = signal::extract_images(signal::stft(clipped, stft_cfg), true);
    if (targets.size() != inputs.size()) {
      throw ShapeError("clean/clipped segment count mismatch for " + e.utterance_id);
    }
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      per_entry[i].push_back({std::move(inputs[k]), std::move(targets[k])});
    }
  });
  std::vector<nn::ImagePair> pairs;
  for (auto& v : per_entry) {
    for (auto& p : v) pairs.push_back(std::move(p));
  }
  return pairs;
}

nn::TrainResult train_command(const DatasetManifest& manifest, const TrainCommandOptions& o) {
  o.unet.validate();
  o.train.validate();
  const auto pairs = build_training_pairs(manifest, o.unet);
  nn::UNetModel model(o.unet, o.train.seed);
  auto result = nn::train(model, pairs, o.train);
  if (!o.checkpoint.empty()) {
    if (o.checkpoint.has_parent_path()) fs::create_directories(o.checkpoint.parent_path());
    nn::save_model(model, o.checkpoint);
  }
  if (!o.loss_csv.empty()) {
    if (o.loss_csv.has_parent_path()) fs::create_directories(o.loss_csv.parent_path());
    std::ofstream f(o.loss_csv, std::ios::trunc);
    if (!f) throw IoError("cannot write " + o.loss_csv.string());
    f << "epoch,loss\n";
    char buf[64];
    for (std::size_t i = 0; i < result.epoch_loss.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, result.epoch_loss[i]);
      f << buf;
    }
  }
  return result;
}

}  // namespace declip::harness
