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

#ifndef DECLIP_METRICS_REPORT_HPP_
#define DECLIP_METRICS_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "declip/signal/waveform.hpp"

namespace declip::metrics {

// Per-utterance measures. A metric that could not be computed is empty and
// the reason is appended to failures.
struct MetricReport {
  std::string utterance_id;
  std::string method;
  double clip_sdr_db = 0.0;
  double noise_sigma2 = 0.0;
  std::optional<double> sdr_db;
  std::optional<double> llr;
  std::optional<double> estoi;
  std::vector<std::string> failures;
};

MetricReport evaluate(const signal::Waveform& clean, const signal::Waveform& processed);

// utterance_id,method,clip_sdr_db,noise_sigma2,sdr_db,llr,estoi
std::string csv_header();
// Missing metrics print as "nan"; numbers use round-trip precision.
std::string to_csv_row(const MetricReport& report);
MetricReport parse_csv_row(const std::string& line);

}  // namespace declip::metrics

#endif  // DECLIP_METRICS_REPORT_HPP_
