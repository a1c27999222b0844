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

#ifndef DECLIP_HARNESS_MANIFEST_HPP_
#define DECLIP_HARNESS_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace declip::harness {

enum class Split { kTrain, kDev, kTest };

std::string to_string(Split split);
Split parse_split(const std::string& name);

// One (utterance, clipping level) pair. Paths are relative to the manifest's
// directory.
struct ManifestEntry {
  std::string utterance_id;
  std::string speaker;
  std::string clean_path;
  std::string clipped_path;
  double target_sdr_db = 0.0;
  double theta = 0.0;
  double realized_sdr_db = 0.0;
  Split split = Split::kTrain;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
  std::string corpus;
  std::uint64_t seed = 0;
  int sample_rate = 0;
  std::vector<double> train_grid;
  std::vector<double> test_grid;
  std::vector<ManifestEntry> entries;
  // Directory the relative paths hang off; set by load/save, not serialized.
  std::filesystem::path root;

  std::filesystem::path resolve(const std::string& relative) const { return root / relative; }
  std::vector<const ManifestEntry*> select(Split split) const;
};

// Writes manifest.json-style content and sets root to the file's directory.
void save_manifest(DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text);

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_MANIFEST_HPP_
