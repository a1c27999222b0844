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

#include "declip/metrics/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "declip/error.hpp"
#include "declip/metrics/estoi.hpp"
#include "declip/metrics/llr.hpp"
#include "declip/signal/clipping.hpp"

namespace declip::metrics {
namespace {

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : "nan"; }

std::optional<double> parse_optional(const std::string& s) {
  if (s == "nan" || s.empty()) return std::nullopt;
  return std::stod(s);
}

template <typename Fn>
void attempt(MetricReport& r, const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    r.failures.push_back(std::string(name) + ": " + e.what());
  }
}

}  // namespace

MetricReport evaluate(const signal::Waveform& clean, const signal::Waveform& processed) {
  MetricReport r;
  attempt(r, "sdr", [&] { r.sdr_db = signal::sdr(clean, processed); });
  attempt(r, "llr", [&] { r.llr = llr(clean, processed); });
  attempt(r, "estoi", [&] { r.estoi = estoi(clean, processed); });
  return r;
}

std::string csv_header() {
  return "utterance_id,method,clip_sdr_db,noise_sigma2,sdr_db,llr,estoi";
}

std::string to_csv_row(const MetricReport& r) {
  std::string row = r.utterance_id + ',' + r.method + ',' + number(r.clip_sdr_db) + ',' +
                    number(r.noise_sigma2) + ',' + number(r.sdr_db) + ',' + number(r.llr) + ',' +
                    number(r.estoi);
  return row;
}

MetricReport parse_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (cells.size() != 7) throw FormatError("metrics CSV row needs 7 fields: " + line);
  MetricReport r;
  r.utterance_id = cells[0];
  r.method = cells[1];
  r.clip_sdr_db = std::stod(cells[2]);
  r.noise_sigma2 = std::stod(cells[3]);
  r.sdr_db = parse_optional(cells[4]);
  r.llr = parse_optional(cells[5]);
  r.estoi = parse_optional(cells[6]);
  return r;
}

}  // namespace declip::metrics
