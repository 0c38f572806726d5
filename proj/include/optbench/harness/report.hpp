// Copyright 2026 The optbench Authors.
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

#pragma once

// Reporting over completed records. A configuration is one
// (suite, problem, budget, workers) tuple; failed records are ignored.
//
//  - normalized loss: final regrets rescaled to [0, 1] within a
//    configuration, over all algorithms and seeds (all 0 when constant);
//  - curves: mean and standard deviation of the normalized loss per
//    (problem, algorithm, budget, workers);
//  - heatmap: H[x][y] = share of shared configurations where x's
//    aggregated regret is strictly lower than y's, ties counting 1/2. The
//    per-configuration aggregate is the lower median over seeds;
//  - ranking: descending mean of H[x][.] over the other algorithms, ties
//    broken by algorithm id.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "optbench/harness/records.hpp"

namespace optbench::harness {

inline std::vector<double> normalize_losses(const std::vector<double>& values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double max = *hi;
  std::vector<double> out(values.size(), 0.0);
  if (!(max > min)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp((values[i] - min) / (max - min), 0.0, 1.0);
  return out;
}

/// Element at index floor((n - 1) / 2) of the sorted values.
inline double lower_median(std::vector<double> values) {
  const auto mid = values.begin() + static_cast<long>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

using ConfigKey = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;

inline ConfigKey config_of(const ExperimentRecord& r) { return {r.suite, r.problem, r.budget, r.workers}; }

struct CurvePoint {
  std::string problem;
  std::string algorithm;
  std::int64_t budget = 0;
  std::int64_t workers = 1;
  double mean = 0.0;
  double std = 0.0;
};

struct Heatmap {
  std::vector<std::string> algorithms;  // ranking order
  std::vector<std::vector<double>> rate;  // NaN where a pair shares no configuration
  std::vector<double> score;            // mean winning frequency, same order
};

struct ReportTables {
  std::vector<CurvePoint> curves;
  Heatmap heatmap;
};

inline std::vector<CurvePoint> compute_curves(const std::vector<ExperimentRecord>& records) {
  std::map<ConfigKey, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records) {
    if (!r.failed) groups[config_of(r)].push_back(&r);
  }
  std::map<std::tuple<std::string, std::string, std::int64_t, std::int64_t>, std::vector<double>> cells;
  for (const auto& [key, group] : groups) {
    std::vector<double> finals;
    for (const auto* r : group) finals.push_back(r->final_regret());
    const auto norm = normalize_losses(finals);
    for (std::size_t i = 0; i < group.size(); ++i) {
      cells[{group[i]->problem, group[i]->algorithm, group[i]->budget, group[i]->workers}].push_back(norm[i]);
    }
  }
  std::vector<CurvePoint> out;
  for (const auto& [key, values] : cells) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    out.push_back(CurvePoint{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), mean, sd});
  }
  return out;
}

inline Heatmap winning_rate_heatmap(const std::vector<ExperimentRecord>& records) {
  std::map<ConfigKey, std::map<std::string, std::vector<double>>> configs;
  std::vector<std::string> algos;
  for (const auto& r : records) {
    if (r.failed) continue;
    configs[config_of(r)][r.algorithm].push_back(r.final_regret());
    algos.push_back(r.algorithm);
  }
  std::sort(algos.begin(), algos.end());
  algos.erase(std::unique(algos.begin(), algos.end()), algos.end());
  const std::size_t n = algos.size();
  if (n < 2) throw ConfigError("a heatmap needs at least two algorithms");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[algos[i]] = i;

  std::vector<std::vector<double>> wins(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> shared(n, std::vector<double>(n, 0.0));
  for (const auto& [key, per_algo] : configs) {
    std::vector<std::pair<std::size_t, double>> agg;
    for (const auto& [a, v] : per_algo) agg.emplace_back(index[a], lower_median(v));
    for (const auto& [i, vi] : agg) {
      for (const auto& [j, vj] : agg) {
        if (i == j) continue;
        shared[i][j] += 1.0;
        wins[i][j] += vi < vj ? 1.0 : (vi == vj ? 0.5 : 0.0);
      }
    }
  }
  std::vector<std::vector<double>> rate(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
  std::vector<double> score(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i][i] = 0.5;
    double sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || shared[i][j] == 0.0) continue;
      rate[i][j] = wins[i][j] / shared[i][j];
      sum += rate[i][j];
      ++count;
    }
    score[i] = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = std::isnan(score[a]) ? -1.0 : score[a];
    const double sb = std::isnan(score[b]) ? -1.0 : score[b];
    return sa > sb;
  });
  Heatmap h;
  for (std::size_t i : order) {
    h.algorithms.push_back(algos[i]);
    h.score.push_back(score[i]);
    std::vector<double> row;
    for (std::size_t j : order) row.push_back(rate[i][j]);
    h.rate.push_back(std::move(row));
  }
  return h;
}

inline ReportTables compute_reports(const std::vector<ExperimentRecord>& records) {
  return ReportTables{compute_curves(records), winning_rate_heatmap(records)};
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_cell(double v) { return std::isnan(v) ? "" : format_real(v); }

inline std::string curves_csv(const std::vector<CurvePoint>& curves) {
  std::string out = "problem,algorithm,budget,workers,mean_normalized_loss,std\n";
  for (const auto& c : curves) {
    out += csv_field(c.problem) + "," + csv_field(c.algorithm) + "," + std::to_string(c.budget) + "," +
           std::to_string(c.workers) + "," + format_real(c.mean) + "," + format_real(c.std) + "\n";
  }
  return out;
}

inline std::string heatmap_csv(const Heatmap& h) {
  std::string out = "algorithm";
  for (const auto& a : h.algorithms) out += "," + csv_field(a);
  out += "\n";
  for (std::size_t i = 0; i < h.algorithms.size(); ++i) {
    out += csv_field(h.algorithms[i]);
    for (double v : h.rate[i]) out += "," + format_cell(v);
    out += "\n";
  }
  return out;
}

inline std::string ranking_text(const Heatmap& h) {
  std::string out;
  for (std::size_t i = 0; i < h.algorithms.size(); ++i) {
    out += std::to_string(i + 1) + "\t" + format_cell(h.score[i]) + "\t" + h.algorithms[i] + "\n";
  }
  return out;
}

/// Writes records.jsonl, timings.jsonl, curves.csv, heatmap.csv and
/// ranking.txt. Every file is rendered before the first one is written.
/// With a single algorithm the heatmap and ranking are trivial one-entry
/// tables.
inline void emit_reports(const std::vector<ExperimentRecord>& records, const std::filesystem::path& dir) {
  if (records.empty()) throw ConfigError("no records to report");
  for (const auto& r : records) r.validate();
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("records.jsonl", records_text(records));
  files.emplace_back("timings.jsonl", timings_text(records));
  files.emplace_back("curves.csv", curves_csv(compute_curves(records)));
  std::set<std::string> algos;
  for (const auto& r : records) {
    if (!r.failed) algos.insert(r.algorithm);
  }
  Heatmap h;
  if (algos.size() >= 2) {
    h = winning_rate_heatmap(records);
  } else {
    for (const auto& a : algos) {
      h.algorithms.push_back(a);
      h.rate.push_back({0.5});
      h.score.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  files.emplace_back("heatmap.csv", heatmap_csv(h));
  files.emplace_back("ranking.txt", ranking_text(h));
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
  for (const auto& [name, text] : files) write_atomically(dir / name, text);
}

}  // namespace optbench::harness
