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

// Experiment records and their line-oriented JSON form. records.jsonl holds
// everything that is a deterministic function of the run inputs; wall
// times go to timings.jsonl so that reruns leave records.jsonl
// byte-identical. Reals are written with 17 significant digits.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "optbench/core/errors.hpp"

namespace optbench::harness {

inline constexpr int kRecordSchema = 1;

struct Checkpoint {
  std::int64_t evaluations = 0;
  double regret = 0.0;

  bool operator==(const Checkpoint&) const = default;
};

struct ExperimentRecord {
  std::string suite;
  std::string problem;
  std::int64_t budget = 0;
  std::int64_t workers = 1;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
  bool failed = false;
  std::string error;
  double wall_time_ms = 0.0;

  [[nodiscard]] double final_regret() const { return checkpoints.back().regret; }

  /// Identity of the cell this record belongs to.
  [[nodiscard]] auto key() const { return std::tie(suite, problem, budget, workers, algorithm, seed); }

  void validate() const {
    if (failed) return;
    if (checkpoints.empty()) throw ParseError("record without checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (i > 0 && checkpoints[i].evaluations <= checkpoints[i - 1].evaluations) {
        throw ParseError("record checkpoints are not strictly increasing");
      }
      if (!std::isfinite(checkpoints[i].regret)) throw ParseError("record with a non-finite regret");
    }
    if (checkpoints.back().evaluations != budget) throw ParseError("record does not end at its budget");
  }

  bool operator==(const ExperimentRecord&) const = default;
};

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

inline std::string record_to_line(const ExperimentRecord& r) {
  std::ostringstream out;
  out << "{\"schema\":" << kRecordSchema << ",\"suite\":" << quote(r.suite) << ",\"problem\":" << quote(r.problem)
      << ",\"budget\":" << r.budget << ",\"workers\":" << r.workers << ",\"algorithm\":" << quote(r.algorithm)
      << ",\"seed\":" << r.seed << ",\"failed\":" << (r.failed ? "true" : "false");
  if (r.failed) out << ",\"error\":" << quote(r.error);
  out << ",\"checkpoints\":[";
  for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
    out << (i ? "," : "") << "[" << r.checkpoints[i].evaluations << "," << format_real(r.checkpoints[i].regret) << "]";
  }
  out << "]}";
  return out.str();
}

inline ExperimentRecord record_from_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    const int schema = j.at("schema").get<int>();
    if (schema != kRecordSchema) throw ParseError("unsupported record schema " + std::to_string(schema));
    ExperimentRecord r;
    r.suite = j.at("suite").get<std::string>();
    r.problem = j.at("problem").get<std::string>();
    r.budget = j.at("budget").get<std::int64_t>();
    r.workers = j.at("workers").get<std::int64_t>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.failed = j.at("failed").get<bool>();
    r.error = j.value("error", std::string());
    for (const auto& c : j.at("checkpoints")) {
      r.checkpoints.push_back(Checkpoint{c.at(0).get<std::int64_t>(), c.at(1).get<double>()});
    }
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what());
  }
}

inline std::string timing_to_line(const ExperimentRecord& r) {
  std::ostringstream out;
  out << "{\"suite\":" << quote(r.suite) << ",\"problem\":" << quote(r.problem) << ",\"budget\":" << r.budget
      << ",\"workers\":" << r.workers << ",\"algorithm\":" << quote(r.algorithm) << ",\"seed\":" << r.seed
      << ",\"wall_time_ms\":" << format_real(r.wall_time_ms) << "}";
  return out.str();
}

/// Writes `content` to `path` through a temporary file and a rename.
inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move " + tmp.string() + " into place");
  }
}

inline std::string records_text(const std::vector<ExperimentRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_to_line(r) + "\n";
  return out;
}

inline std::string timings_text(const std::vector<ExperimentRecord>& records) {
  std::string out;
  for (const auto& r : records) out += timing_to_line(r) + "\n";
  return out;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Reads records.jsonl from `dir`, attaching wall times from timings.jsonl
/// when that file is present.
inline std::vector<ExperimentRecord> load_records(const std::filesystem::path& dir) {
  std::ifstream in(dir / "records.jsonl");
  if (!in) throw ConfigError("cannot read " + (dir / "records.jsonl").string());
  std::vector<ExperimentRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(record_from_line(line));
  }
  std::ifstream times(dir / "timings.jsonl");
  std::size_t i = 0;
  while (times && std::getline(times, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (i < records.size() && j.at("problem").get<std::string>() == records[i].problem &&
          j.at("algorithm").get<std::string>() == records[i].algorithm &&
          j.at("seed").get<std::uint64_t>() == records[i].seed) {
        records[i].wall_time_ms = j.at("wall_time_ms").get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed timing line: ") + e.what());
    }
    ++i;
  }
  return records;
}

}  // namespace optbench::harness
