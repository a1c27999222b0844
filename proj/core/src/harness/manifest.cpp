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

#include "declip/harness/manifest.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "declip/error.hpp"

namespace declip::harness {

std::string to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw InvalidArgument("unknown split '" + name + "' (train, dev, test)");
}

std::vector<const ManifestEntry*> DatasetManifest::select(Split split) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(&e);
  }
  return out;
}

std::string manifest_to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["corpus"] = m.corpus;
  j["seed"] = m.seed;
  j["sample_rate"] = m.sample_rate;
  j["train_grid_db"] = m.train_grid;
  j["test_grid_db"] = m.test_grid;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : m.entries) {
    j["entries"].push_back({
        {"utterance_id", e.utterance_id},
        {"speaker", e.speaker},
        {"clean", e.clean_path},
        {"clipped", e.clipped_path},
        {"target_sdr_db", e.target_sdr_db},
        {"theta", e.theta},
        {"realized_sdr_db", e.realized_sdr_db},
        {"split", to_string(e.split)},
    });
  }
  return j.dump(2);
}

DatasetManifest manifest_from_json(const std::string& text) {
  DatasetManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.corpus = j.at("corpus").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.sample_rate = j.at("sample_rate").get<int>();
    m.train_grid = j.at("train_grid_db").get<std::vector<double>>();
    m.test_grid = j.at("test_grid_db").get<std::vector<double>>();
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.utterance_id = je.at("utterance_id").get<std::string>();
      e.speaker = je.value("speaker", std::string());
      e.clean_path = je.at("clean").get<std::string>();
      e.clipped_path = je.at("clipped").get<std::string>();
      e.target_sdr_db = je.at("target_sdr_db").get<double>();
      e.theta = je.at("theta").get<double>();
      e.realized_sdr_db = je.at("realized_sdr_db").get<double>();
      e.split = parse_split(je.at("split").get<std::string>());
      m.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

void save_manifest(DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write manifest " + path.string());
  f << manifest_to_json(manifest) << '\n';
  manifest.root = path.parent_path();
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  DatasetManifest m = manifest_from_json(ss.str());
  m.root = path.parent_path();
  return m;
}

}  // namespace declip::harness
