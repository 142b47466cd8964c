// Copyright 2026 The randstruct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report serialization.
//
// CSV: one header line, one row per trial, fixed column order (see
// kCsvColumns). Doubles use %.12g so two runs of the same config produce
// identical bytes. Anomalies are joined with ';'. Nothing run-dependent
// (timestamps, hostnames) goes in the CSV.
//
// JSON: {"config", "metadata", "aggregate", "rows"}. The metadata carries the
// generation timestamp; rows carry the per-trial details object.

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "randstruct/experiment.hpp"

namespace randstruct {

inline constexpr std::string_view kCsvColumns =
    "seed,success,w_size,a_size,shortfall,eta,eta_ok,fhat_l2sq,restriction_norm,restriction_ok,"
    "decomposition_ok,metric,metric2,anomalies";

namespace report_detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace report_detail

inline std::string csv_row(const TrialRow& r) {
  using report_detail::fmt_double;
  std::string anomalies;
  for (std::size_t i = 0; i < r.anomalies.size(); ++i) {
    if (i) anomalies += ';';
    anomalies += r.anomalies[i];
  }
  std::ostringstream os;
  os << r.seed << ',' << (r.success ? 1 : 0) << ',' << r.w_size << ',' << r.a_size << ','
     << (r.shortfall ? 1 : 0) << ',' << fmt_double(r.eta) << ',' << (r.eta_ok ? 1 : 0) << ','
     << fmt_double(r.fhat_l2sq) << ',' << fmt_double(r.restriction_norm) << ','
     << (r.restriction_ok ? 1 : 0) << ',' << (r.decomposition_ok ? 1 : 0) << ',' << fmt_double(r.metric)
     << ',' << fmt_double(r.metric2) << ',' << report_detail::csv_field(anomalies);
  return os.str();
}

inline std::string to_csv(const ExperimentReport& report) {
  std::string out(kCsvColumns);
  out += '\n';
  for (const TrialRow& r : report.rows) {
    out += csv_row(r);
    out += '\n';
  }
  return out;
}

/// Parses rows written by to_csv. Details are not part of the CSV contract.
inline std::vector<TrialRow> parse_csv_rows(std::string_view text) {
  std::vector<TrialRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvColumns) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  auto flag = [](const std::string& s) { return s == "1"; };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = report_detail::split_csv_line(line);
    if (f.size() != 14) throw std::runtime_error("csv: expected 14 fields, got " + std::to_string(f.size()));
    TrialRow r;
    r.seed = std::stoull(f[0]);
    r.success = flag(f[1]);
    r.w_size = std::stoull(f[2]);
    r.a_size = std::stoull(f[3]);
    r.shortfall = flag(f[4]);
    r.eta = std::stod(f[5]);
    r.eta_ok = flag(f[6]);
    r.fhat_l2sq = std::stod(f[7]);
    r.restriction_norm = std::stod(f[8]);
    r.restriction_ok = flag(f[9]);
    r.decomposition_ok = flag(f[10]);
    r.metric = std::stod(f[11]);
    r.metric2 = std::stod(f[12]);
    std::string_view rest = f[13];
    while (!rest.empty()) {
      const std::size_t semi = rest.find(';');
      r.anomalies.emplace_back(rest.substr(0, semi));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline json aggregate_json(const ExperimentReport& report) {
  std::size_t eta_ok = 0, restriction_ok = 0, decomposition_ok = 0, shortfall = 0, anomalous = 0;
  double metric_sum = 0.0;
  for (const TrialRow& r : report.rows) {
    eta_ok += r.eta_ok;
    restriction_ok += r.restriction_ok;
    decomposition_ok += r.decomposition_ok;
    shortfall += r.shortfall;
    anomalous += !r.anomalies.empty();
    metric_sum += r.metric;
  }
  const double n = report.rows.empty() ? 1.0 : static_cast<double>(report.rows.size());
  return json{{"trials", report.trials()},
              {"successes", report.successes()},
              {"success_fraction", report.success_fraction()},
              {"eta_ok", eta_ok},
              {"restriction_ok", restriction_ok},
              {"decomposition_ok", decomposition_ok},
              {"shortfall", shortfall},
              {"rows_with_anomalies", anomalous},
              {"metric_mean", metric_sum / n}};
}

inline json row_json(const TrialRow& r) {
  return json{{"seed", r.seed},
              {"success", r.success},
              {"w_size", r.w_size},
              {"a_size", r.a_size},
              {"shortfall", r.shortfall},
              {"eta", r.eta},
              {"eta_ok", r.eta_ok},
              {"fhat_l2sq", r.fhat_l2sq},
              {"restriction_norm", r.restriction_norm},
              {"restriction_ok", r.restriction_ok},
              {"decomposition_ok", r.decomposition_ok},
              {"metric", r.metric},
              {"metric2", r.metric2},
              {"anomalies", r.anomalies},
              {"details", r.details}};
}

inline json to_json(const ExperimentReport& report) {
  json meta = report.metadata;
  meta["generated_at"] = report_detail::utc_timestamp();
  json rows = json::array();
  for (const TrialRow& r : report.rows) rows.push_back(row_json(r));
  return json{{"config", config_to_json(report.config)},
              {"metadata", meta},
              {"aggregate", aggregate_json(report)},
              {"rows", rows}};
}

inline ExperimentReport report_from_json(const json& j) {
  ExperimentReport rep;
  try {
    rep.config = config_from_json(j.at("config"));
    rep.metadata = j.value("metadata", json::object());
    for (const json& r : j.at("rows")) {
      TrialRow row;
      row.seed = r.at("seed").get<std::uint64_t>();
      row.success = r.at("success").get<bool>();
      row.w_size = r.at("w_size").get<std::size_t>();
      row.a_size = r.at("a_size").get<std::size_t>();
      row.shortfall = r.at("shortfall").get<bool>();
      row.eta = r.at("eta").get<double>();
      row.eta_ok = r.at("eta_ok").get<bool>();
      row.fhat_l2sq = r.at("fhat_l2sq").get<double>();
      row.restriction_norm = r.at("restriction_norm").get<double>();
      row.restriction_ok = r.at("restriction_ok").get<bool>();
      row.decomposition_ok = r.at("decomposition_ok").get<bool>();
      row.metric = r.at("metric").get<double>();
      row.metric2 = r.at("metric2").get<double>();
      row.anomalies = r.at("anomalies").get<std::vector<std::string>>();
      row.details = r.value("details", json::object());
      rep.rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report json: ") + e.what());
  }
  return rep;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string render_report(const ExperimentReport& report, std::string_view format) {
  if (format == "csv") return to_csv(report);
  if (format == "json") return to_json(report).dump(2) + "\n";
  throw std::invalid_argument("unknown report format '" + std::string(format) + "'");
}

/// Writes the report to `path` in the given format ("csv" or "json").
inline void emit_report(const ExperimentReport& report, std::string_view format, const std::string& path) {
  write_file(path, render_report(report, format));
}

}  // namespace randstruct
