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

#include "declip/harness/results_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "declip/error.hpp"

namespace declip::harness {
namespace {

std::string column_name(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kSdr: return "sdr_db";
    case Metric::kLlr: return "llr";
    case Metric::kEstoi: return "estoi";
  }
  return "sdr_db";
}

bool higher_is_better(Metric metric) { return metric != Metric::kLlr; }

std::optional<double> metric_value(const metrics::MetricReport& report, Metric metric) {
  switch (metric) {
    case Metric::kSdr: return report.sdr_db;
    case Metric::kLlr: return report.llr;
    case Metric::kEstoi: return report.estoi;
  }
  return std::nullopt;
}

std::optional<std::size_t> ResultsTable::best_row(std::size_t c) const {
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < methods.size(); ++r) {
    const auto& v = c < columns.size() ? cells[r][c] : average[r];
    if (!v) continue;
    if (!best) {
      best = r;
      continue;
    }
    const auto& b = c < columns.size() ? cells[*best][c] : average[*best];
    if (higher_is_better(metric) ? *v > *b : *v < *b) best = r;
  }
  return best;
}

ResultsTable aggregate(std::span<const metrics::MetricReport> reports, Metric metric,
                       ColumnKey key, std::span<const double> columns,
                       std::span<const std::string> methods) {
  if (columns.empty() || methods.empty()) {
    throw InvalidArgument("aggregate: need at least one column and one method");
  }
  ResultsTable t;
  t.metric = metric;
  t.key = key;
  t.columns.assign(columns.begin(), columns.end());
  t.methods.assign(methods.begin(), methods.end());
  const std::size_t rows = methods.size(), cols = columns.size();
  std::vector<std::vector<double>> sums(rows, std::vector<double>(cols, 0.0));
  t.counts.assign(rows, std::vector<std::size_t>(cols, 0));
  for (const auto& r : reports) {
    const auto m = std::find(methods.begin(), methods.end(), r.method);
    const double k = key == ColumnKey::kClipSdr ? r.clip_sdr_db : r.noise_sigma2;
    const auto c = std::find(columns.begin(), columns.end(), k);
    const auto v = metric_value(r, metric);
    if (m == methods.end() || c == columns.end() || !v) continue;
    const auto ri = static_cast<std::size_t>(m - methods.begin());
    const auto ci = static_cast<std::size_t>(c - columns.begin());
    sums[ri][ci] += *v;
    ++t.counts[ri][ci];
  }
  t.cells.assign(rows, std::vector<std::optional<double>>(cols));
  t.average.assign(rows, std::nullopt);
  for (std::size_t ri = 0; ri < rows; ++ri) {
    double total = 0.0;
    bool complete = true;
    for (std::size_t ci = 0; ci < cols; ++ci) {
      if (t.counts[ri][ci] == 0) {
        complete = false;
        continue;
      }
      t.cells[ri][ci] = sums[ri][ci] / static_cast<double>(t.counts[ri][ci]);
      total += *t.cells[ri][ci];
    }
    if (complete) t.average[ri] = total / static_cast<double>(cols);
  }
  return t;
}

std::string format_cell(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string to_text(const ResultsTable& t) {
  const std::size_t cols = t.columns.size() + 1;
  std::vector<std::string> header{"method"};
  for (double c : t.columns) header.push_back(column_name(c));
  header.push_back("avg");

  std::vector<std::vector<std::string>> body;
  for (std::size_t r = 0; r < t.methods.size(); ++r) {
    std::vector<std::string> row{t.methods[r]};
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& v = c < t.columns.size() ? t.cells[r][c] : t.average[r];
      std::string s = format_cell(v);
      if (t.best_row(c) == r) s += '*';
      row.push_back(s);
    }
    body.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  out << to_string(t.metric) << " by "
      << (t.key == ColumnKey::kClipSdr ? "clipping SDR (dB)" : "noise variance") << " ("
      << (higher_is_better(t.metric) ? "higher" : "lower") << " is better, * = best)\n";
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(width[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : body) emit(row);
  return out.str();
}

std::string to_csv(const ResultsTable& t) {
  std::ostringstream out;
  out << "method";
  for (double c : t.columns) out << ',' << column_name(c);
  out << ",avg\n";
  for (std::size_t r = 0; r < t.methods.size(); ++r) {
    out << t.methods[r];
    for (const auto& v : t.cells[r]) out << ',' << format_cell(v);
    out << ',' << format_cell(t.average[r]) << '\n';
  }
  return out.str();
}

}  // namespace declip::harness
