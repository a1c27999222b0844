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

#ifndef DECLIP_HARNESS_RESULTS_TABLE_HPP_
#define DECLIP_HARNESS_RESULTS_TABLE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "declip/metrics/report.hpp"

namespace declip::harness {

enum class Metric { kSdr, kLlr, kEstoi };

std::string to_string(Metric metric);
bool higher_is_better(Metric metric);
std::optional<double> metric_value(const metrics::MetricReport& report, Metric metric);

// Which report field selects the column.
enum class ColumnKey { kClipSdr, kNoiseSigma2 };

// Methods x columns grid of per-utterance means, plus an average column that
// is the mean of the row's column means.
struct ResultsTable {
  Metric metric = Metric::kSdr;
  ColumnKey key = ColumnKey::kClipSdr;
  std::vector<double> columns;
  std::vector<std::string> methods;
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::optional<double>> average;

  // Row index of the best value in column c (average when c == columns.size()).
  std::optional<std::size_t> best_row(std::size_t c) const;
};

ResultsTable aggregate(std::span<const metrics::MetricReport> reports, Metric metric,
                       ColumnKey key, std::span<const double> columns,
                       std::span<const std::string> methods);

// Fixed four-decimal rendering shared by the text and CSV forms.
std::string format_cell(const std::optional<double>& v);

// Aligned text; the best entry of each column carries a trailing '*'.
std::string to_text(const ResultsTable& table);
// method,<col>...,avg
std::string to_csv(const ResultsTable& table);

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_RESULTS_TABLE_HPP_
