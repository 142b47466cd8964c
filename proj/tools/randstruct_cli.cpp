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


// Command-line front end: run sweeps, audit saved reports, convert formats.
//
// Exit status: 0 when the sweep completes (whatever the success fraction),
// 1 on configuration or I/O errors, 3 when an audit finds a mismatch.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "randstruct.hpp"

namespace {

using randstruct::ExperimentConfig;
using randstruct::json;

struct RunFlags {
  std::string config_path;
  std::string experiment;
  std::size_t n = 0;
  double p = 0, alpha = 0, beta = 0, sigma = 0, epsilon0 = 0, c0 = 0, q = 0, m_budget = 0, eta_budget = 0;
  unsigned k = 0, threads = 0;
  std::string seeds, strategy, out, format;
};

// Flags first, then the config file on top: keys present in the file win.
ExperimentConfig resolve(const RunFlags& f, const CLI::App& app) {
  ExperimentConfig c;
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--experiment")) c.experiment = randstruct::parse_experiment(f.experiment);
  if (given("--n")) c.n = f.n;
  if (given("--p")) c.p = f.p;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--k")) c.k = f.k;
  if (given("--beta")) c.beta = f.beta;
  if (given("--sigma")) c.sigma = f.sigma;
  if (given("--epsilon0")) c.epsilon0 = f.epsilon0;
  if (given("--c0")) c.c0 = f.c0;
  if (given("--q")) c.q = f.q;
  if (given("--m-budget")) c.m_budget = f.m_budget;
  if (given("--eta-budget")) c.eta_budget = f.eta_budget;
  if (given("--seeds")) c.seeds = randstruct::parse_seed_spec(f.seeds);
  if (given("--strategy")) {
    try {
      c.strategy = randstruct::parse_strategy(f.strategy);
    } catch (const std::invalid_argument& e) {
      throw randstruct::ConfigError(e.what());
    }
  }
  if (given("--out")) c.output = f.out;
  if (given("--format")) c.format = f.format;
  if (given("--threads")) c.threads = f.threads;
  if (!f.config_path.empty()) {
    json j;
    try {
      j = json::parse(randstruct::read_file(f.config_path));
    } catch (const json::exception& e) {
      throw randstruct::ConfigError("config '" + f.config_path + "': " + e.what());
    }
    c = randstruct::config_from_json(j, c);
  }
  return c;
}

void print_summary(const randstruct::ExperimentReport& r) {
  std::fprintf(stderr, "%s: N=%zu trials=%zu successes=%zu fraction=%.4f\n",
               std::string(randstruct::to_string(r.config.experiment)).c_str(), r.config.n, r.trials(),
               r.successes(), r.success_fraction());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudorandom-set additive structure experiments"};
  app.require_subcommand(1);

  RunFlags f;
  CLI::App* run = app.add_subcommand("run", "Run a parameter sweep");
  run->add_option("--config", f.config_path, "JSON config; its keys override flags");
  run->add_option("--experiment", f.experiment,
                  "sarkozy | power-diff | sumset-size | sumset-ap | decomposition-audit | increment-trace");
  run->add_option("--n", f.n, "Prime modulus N");
  run->add_option("--p", f.p, "Sampling probability p in (0,1]");
  run->add_option("--alpha", f.alpha, "Relative density of A in W");
  run->add_option("--k", f.k, "Power exponent or AP length");
  run->add_option("--beta", f.beta, "Sumset density target");
  run->add_option("--sigma", f.sigma, "Exceptional-set parameter");
  run->add_option("--epsilon0", f.epsilon0, "Large-spectrum threshold");
  run->add_option("--c0", f.c0, "Regularity constant");
  run->add_option("--q", f.q, "Restriction exponent");
  run->add_option("--m-budget", f.m_budget, "Restriction budget M");
  run->add_option("--eta-budget", f.eta_budget, "Pseudorandomness budget for eta");
  run->add_option("--seeds", f.seeds, "Count (100), range (0-99) or list (1,2,3)");
  run->add_option("--strategy", f.strategy,
                  "uniform-random | progression-intersect | square-difference-free-greedy");
  run->add_option("--out", f.out, "Output path (stdout when omitted)");
  run->add_option("--format", f.format, "csv | json");
  run->add_option("--threads", f.threads, "Worker threads (0 = all cores)");

  std::string report_path, emit_format = "csv", emit_out;
  unsigned audit_threads = 0;
  CLI::App* audit = app.add_subcommand("audit", "Re-run a JSON report's seeds and compare rows");
  audit->add_option("--report", report_path, "JSON report")->required();
  audit->add_option("--threads", audit_threads, "Worker threads (0 = all cores)");
  CLI::App* emit = app.add_subcommand("emit", "Convert a JSON report to another format");
  emit->add_option("--report", report_path, "JSON report")->required();
  emit->add_option("--format", emit_format, "csv | json");
  emit->add_option("--out", emit_out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      const ExperimentConfig config = resolve(f, *run);
      const randstruct::ExperimentReport report = randstruct::run_trials(config);
      if (config.output.empty()) {
        std::cout << randstruct::render_report(report, config.format);
      } else {
        randstruct::emit_report(report, config.format, config.output);
      }
      print_summary(report);
      return 0;
    }
    const randstruct::ExperimentReport saved =
        randstruct::report_from_json(json::parse(randstruct::read_file(report_path)));
    if (audit->parsed()) {
      ExperimentConfig config = saved.config;
      config.threads = audit_threads;
      const randstruct::ExperimentReport rerun = randstruct::run_trials(config);
      const std::string a = randstruct::to_csv(saved);
      const std::string b = randstruct::to_csv(rerun);
      if (a != b) {
        std::fprintf(stderr, "audit: rows differ from the saved report\n");
        return 3;
      }
      std::fprintf(stderr, "audit: %zu rows reproduced exactly\n", rerun.trials());
      return 0;
    }
    const std::string text = randstruct::render_report(saved, emit_format);
    if (emit_out.empty()) {
      std::cout << text;
    } else {
      randstruct::write_file(emit_out, text);
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
