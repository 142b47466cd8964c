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

// Density increment on Bohr sets.
//
// Given f : Z_N -> [0,1] supported on a regular Bohr set B = b + B(Gamma, delta)
// with mean alpha on B, one step either
//
//   Found:     finds a regular B' = 2b + B(Gamma, delta') on which
//              (f*f)(x) >= (alpha^2 / 2)|B| for at least (1 - sigma)|B'| points, or
//   Increment: finds a regular B'' = b'' + B(Gamma u Lambda, delta'') with
//              E(f | B'') >= alpha (1 + 2^-5).
//
// f*f of a function supported on b + B lives around 2b, which is why B' is
// centered there; with b = 0 this is the usual b + B(Gamma, delta').
//
// Lambda is chosen greedily from the large spectrum L of the witness set S:
// candidates are taken in decreasing |S^(xi)| and skipped when they are
// +-xi1 or +-xi1 +- xi2 for already chosen xi1, xi2 (or lie in +-Gamma), up to
// ceil(16 alpha^-2 log(1/sigma)) frequencies. If the resulting B'' does not
// deliver the increment, delta'' is halved (each halving is recorded as a
// radius fallback) until it does or B'' degenerates to a point.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "randstruct/bohr.hpp"
#include "randstruct/fourier.hpp"
#include "randstruct/residue_set.hpp"
#include "randstruct/tolerance.hpp"

namespace randstruct {

/// Required growth factor of the mean per increment: 1 + 2^-5.
inline constexpr double kIncrementFactor = 1.0 + 1.0 / 32.0;

struct FoundPair {
  BohrSet b;
  BohrSet bprime;
  double alpha = 0.0;      // E(f | B)
  double threshold = 0.0;  // (alpha^2 / 2)|B|
  std::size_t good_count = 0;
  double good_fraction = 0.0;  // good_count / |B'|
};

struct DensityIncrement {
  BohrSet bdoubleprime;
  BohrSet bprime;  // the B' on which the Found condition failed
  double alpha = 0.0;
  double new_mean = 0.0;  // E(f | B'')
  std::vector<std::size_t> lambda;  // frequencies added to Gamma
  std::size_t witness_size = 0;     // |S|
  std::size_t large_spectrum_size = 0;  // |L|
  double large_spectrum_bound = 0.0;    // (4N / (alpha sigma |B'|))^2 |S| / N
  double energy = 0.0;         // (N/|B|) sum_{xi in L} |g^(xi)|^2
  double energy_budget = 0.0;  // alpha^2/4 - d delta'/delta
  bool cap_bound = false;      // Lambda selection stopped at its cap
  std::size_t radius_fallbacks = 0;
  double chang_radius = 0.0;   // min(delta', 4 delta' alpha^2 / (d^2 log(1/sigma)))
};

struct IncrementFailure {
  enum class Reason { kNoRegularRadius, kDichotomyFailure };
  Reason reason = Reason::kNoRegularRadius;
  std::string message;
  double alpha = 0.0;
  double best_mean = 0.0;
  std::vector<double> grid_defects;
};

using IncrementOutcome = std::variant<FoundPair, DensityIncrement, IncrementFailure>;

inline const char* outcome_tag(const IncrementOutcome& o) {
  if (std::holds_alternative<FoundPair>(o)) return "found";
  if (std::holds_alternative<DensityIncrement>(o)) return "increment";
  return "failure";
}

namespace detail {

inline bool meets_threshold(double value, double threshold) {
  return value >= threshold - tol::kThresholdRel * std::max(1.0, std::abs(threshold));
}

template <ZnReal Fn>
void require_support_in(const Fn& f, const BohrSet& b, const char* what) {
  detail::require_same_modulus(f.modulus(), b.modulus, what);
  const ResidueSet members = b.as_set();
  for (std::size_t x = 0; x < f.modulus(); ++x) {
    if (f[x] != 0.0 && !members.contains(x)) {
      throw std::invalid_argument(std::string(what) + ": f is nonzero at x=" + std::to_string(x) +
                                  " outside the Bohr set");
    }
  }
}

template <ZnReal Fn>
double mean_on(const Fn& f, const BohrSet& b) {
  double s = 0.0;
  for (std::size_t x : b.elements) s += f[x];
  return s / static_cast<double>(b.size());
}

inline std::vector<std::size_t> merge_frequencies(std::vector<std::size_t> a,
                                                  const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace detail

/// g = f - alpha 1_B with alpha = E(f | B).
template <ZnReal Fn>
BalancedFunction balanced_function(const Fn& f, const BohrSet& b) {
  detail::require_support_in(f, b, "balanced_function");
  const double alpha = detail::mean_on(f, b);
  std::vector<double> g(f.values().begin(), f.values().end());
  for (std::size_t x : b.elements) g[x] -= alpha;
  return BalancedFunction(std::move(g));
}

/// The ceil(sigma |B'|) points of B' with the smallest convolution values among
/// those below `threshold`, ordered by (value, element). Throws std::logic_error
/// when there are not enough sub-threshold points, which means the Found
/// condition actually holds.
inline ResidueSet witness_set(const BalancedFunction& self_convolution, const BohrSet& bprime,
                              double threshold, double sigma) {
  const auto need = static_cast<std::size_t>(
      std::ceil(sigma * static_cast<double>(bprime.size()) - 1e-9));
  std::vector<std::pair<double, std::size_t>> below;
  for (std::size_t x : bprime.elements) {
    const double v = self_convolution[x];
    if (!detail::meets_threshold(v, threshold)) below.emplace_back(v, x);
  }
  if (below.size() < need) {
    throw std::logic_error("witness_set: only " + std::to_string(below.size()) +
                           " sub-threshold points, need " + std::to_string(need));
  }
  std::sort(below.begin(), below.end());
  ResidueSet s(bprime.modulus);
  for (std::size_t i = 0; i < need; ++i) s.insert(below[i].second);
  return s;
}

template <ZnReal Fn>
ResidueSet witness_set(const Fn& f, const BohrSet& b, const BohrSet& bprime, double alpha,
                       double sigma) {
  const BalancedFunction conv = convolve(f, f).template as<Signed>();
  return witness_set(conv, bprime, alpha * alpha / 2.0 * static_cast<double>(b.size()), sigma);
}

/// Greedy frequency selection from the large spectrum; see the header comment.
struct FrequencySelection {
  std::vector<std::size_t> lambda;
  bool cap_bound = false;
};

inline FrequencySelection select_frequencies(const Spectrum& s_hat,
                                             const std::vector<std::size_t>& large,
                                             const std::vector<std::size_t>& gamma,
                                             std::size_t cap) {
  const std::size_t n = s_hat.modulus();
  std::vector<std::size_t> order;
  for (std::size_t xi : large) {
    if (xi != 0) order.push_back(xi);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::abs(s_hat[a]), mb = std::abs(s_hat[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  });
  ResidueSet covered(n);
  covered.insert(0);
  for (std::size_t g : gamma) {
    covered.insert(g);
    covered.insert(n - g % n);
  }
  FrequencySelection sel;
  for (std::size_t xi : order) {
    if (covered.contains(xi)) continue;
    if (sel.lambda.size() >= cap) {
      sel.cap_bound = true;
      break;
    }
    covered.insert(xi);
    covered.insert(n - xi);
    for (std::size_t c : sel.lambda) {
      covered.insert(xi + c);
      covered.insert(2 * n - xi - c);
      covered.insert(xi + n - c);
      covered.insert(c + n - xi);
    }
    covered.insert(2 * xi);
    covered.insert(2 * n - 2 * xi);
    sel.lambda.push_back(xi);
  }
  std::sort(sel.lambda.begin(), sel.lambda.end());
  return sel;
}

/// One step of the dichotomy. f must be supported on B with values in [0, 1]
/// and positive mean on B.
template <ZnReal Fn>
IncrementOutcome increment_step(const Fn& f, const BohrSet& b, double sigma, double c0) {
  detail::require_support_in(f, b, "increment_step");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("increment_step: sigma outside (0,1]");
  if (!(c0 > 0.0 && c0 < 1.0)) throw std::invalid_argument("increment_step: c0 outside (0,1)");
  for (double v : f.values()) {
    if (v < -tol::kCertificateAbs || v > 1.0 + tol::kCertificateAbs) {
      throw std::invalid_argument("increment_step: f must take values in [0,1]");
    }
  }
  const std::size_t n = f.modulus();
  const double alpha = detail::mean_on(f, b);
  if (!(alpha > 0.0)) throw std::invalid_argument("increment_step: E(f|B) must be positive");
  const double d = static_cast<double>(std::max<std::size_t>(1, b.frequencies.size()));
  const double delta = b.radius;

  // (1) delta' in (c0 alpha^2 delta / d, 2 c0 alpha^2 delta / d), regular.
  const BohrProfile gamma_profile(n, b.frequencies);
  RadiusSearch search;
  const double top = std::min(2.0 * c0 * alpha * alpha * delta / d, 1.999);
  std::optional<BohrSet> bprime =
      regular_bohr_set(gamma_profile, top, c0, (2 * b.shift) % n, &search);
  if (!bprime) {
    return IncrementFailure{IncrementFailure::Reason::kNoRegularRadius,
                            "no regular radius for B'", alpha, 0.0, search.defects};
  }

  // (2) the Found test on B'.
  const BalancedFunction conv = convolve(f, f).template as<Signed>();
  const double threshold = alpha * alpha / 2.0 * static_cast<double>(b.size());
  std::size_t good = 0;
  for (std::size_t x : bprime->elements) {
    if (detail::meets_threshold(conv[x], threshold)) ++good;
  }
  const double bp_size = static_cast<double>(bprime->size());
  if (static_cast<double>(good) >= (1.0 - sigma) * bp_size - 1e-9) {
    return FoundPair{b, *bprime, alpha, threshold, good, static_cast<double>(good) / bp_size};
  }

  // (3) witness set, balanced function, large spectrum.
  DensityIncrement inc;
  inc.alpha = alpha;
  inc.bprime = *bprime;
  const ResidueSet s = witness_set(conv, *bprime, threshold, sigma);
  inc.witness_size = s.size();
  const Spectrum s_hat = dft(s.indicator());
  const Spectrum g_hat = dft(balanced_function(f, b));
  const double cutoff = alpha * sigma * bp_size / (4.0 * static_cast<double>(n));
  std::vector<std::size_t> large;
  for (std::size_t xi = 0; xi < n; ++xi) {
    if (std::abs(s_hat[xi]) >= cutoff) {
      large.push_back(xi);
      inc.energy += std::norm(g_hat[xi]);
    }
  }
  inc.energy *= static_cast<double>(n) / static_cast<double>(b.size());
  inc.energy_budget = alpha * alpha / 4.0 - d * (*bprime).radius / delta;
  inc.large_spectrum_size = large.size();
  const double lb = 4.0 * static_cast<double>(n) / (alpha * sigma * bp_size);
  inc.large_spectrum_bound = lb * lb * static_cast<double>(s.size()) / static_cast<double>(n);

  const double log_inv_sigma = std::max(std::log(1.0 / sigma), 1e-12);
  auto cap = static_cast<std::size_t>(std::ceil(16.0 / (alpha * alpha) * log_inv_sigma));
  const auto admissible = static_cast<std::size_t>(std::floor(std::sqrt(c0) * static_cast<double>(n)));
  const std::size_t room = admissible > b.frequencies.size() ? admissible - b.frequencies.size() : 0;
  bool room_bound = false;
  if (cap > room) {
    cap = room;
    room_bound = true;
  }
  FrequencySelection sel = select_frequencies(s_hat, large, b.frequencies, cap);
  inc.lambda = sel.lambda;
  inc.cap_bound = sel.cap_bound || (room_bound && sel.lambda.size() == cap);

  // (4) B'' at the Chang-scale radius, with b'' maximizing the local mass.
  const std::vector<std::size_t> gamma2 = detail::merge_frequencies(b.frequencies, inc.lambda);
  const BohrProfile profile2(n, gamma2);
  const double dprime = bprime->radius;
  inc.chang_radius = std::min(dprime, 4.0 * dprime * alpha * alpha / (d * d * log_inv_sigma));
  double radius_top = inc.chang_radius;
  double best_mean = 0.0;
  std::vector<double> last_defects;
  for (std::size_t attempt = 0; attempt < 64; ++attempt, radius_top /= 2.0) {
    if (!(radius_top > 0.0)) break;
    RadiusSearch s2;
    std::optional<BohrSet> core = regular_bohr_set(profile2, radius_top, c0, 0, &s2);
    if (!core) {
      last_defects = s2.defects;
      ++inc.radius_fallbacks;
      continue;
    }
    const BalancedFunction mass = convolve(f, core->indicator()).template as<Signed>();
    std::size_t best_x = 0;
    for (std::size_t x = 1; x < n; ++x) {
      if (mass[x] > mass[best_x]) best_x = x;
    }
    BohrSet candidate = bohr_from_profile(profile2, core->radius, best_x);
    candidate.regularity = core->regularity;
    const double mean = detail::mean_on(f, candidate);
    best_mean = std::max(best_mean, mean);
    if (mean >= alpha * kIncrementFactor) {
      inc.new_mean = mean;
      inc.bdoubleprime = std::move(candidate);
      return inc;
    }
    if (core->size() <= 1) break;
    ++inc.radius_fallbacks;
  }
  IncrementFailure fail;
  fail.alpha = alpha;
  fail.best_mean = best_mean;
  if (best_mean == 0.0 && !last_defects.empty()) {
    fail.reason = IncrementFailure::Reason::kNoRegularRadius;
    fail.message = "no regular radius for B''";
    fail.grid_defects = std::move(last_defects);
  } else {
    fail.reason = IncrementFailure::Reason::kDichotomyFailure;
    fail.message = "increment below alpha(1+2^-5): best mean " + std::to_string(best_mean) +
                   " vs alpha " + std::to_string(alpha);
  }
  return fail;
}

struct StepRecord {
  std::size_t k = 0;
  std::size_t gamma_size = 0;
  double delta = 0.0;
  double alpha = 0.0;       // E(f | B_k)
  std::string outcome;      // found | increment | failure
  std::size_t b_size = 0;
  double threshold = 0.0;      // (alpha_k^2 / 2)|B_k| for the normalized function
  double raw_threshold = 0.0;  // same threshold for the unnormalized function
  std::size_t lambda_size = 0;
  std::size_t large_spectrum_size = 0;
  double energy = 0.0;
  double energy_budget = 0.0;
  bool cap_bound = false;
  std::size_t radius_fallbacks = 0;
};

struct IterationTrace {
  double initial_alpha = 0.0;
  double normalization = 1.0;  // the iterated function is (raw function) / normalization
  std::size_t step_bound = 0;  // ceil(log(1/alpha) / log(33/32)) + 1
  std::vector<StepRecord> steps;
  std::optional<FoundPair> terminal;
  std::optional<IncrementFailure> failure;
  bool nonterminal = false;
  std::vector<std::string> anomalies;

  /// The fixed CSV contract: k,gamma_size,delta,alpha,outcome.
  std::string to_csv() const {
    std::string out = "k,gamma_size,delta,alpha,outcome\n";
    char buf[160];
    for (const StepRecord& s : steps) {
      std::snprintf(buf, sizeof(buf), "%zu,%zu,%.12g,%.12g,%s\n", s.k, s.gamma_size, s.delta,
                    s.alpha, s.outcome.c_str());
      out += buf;
    }
    return out;
  }
};

inline std::size_t increment_step_bound(double alpha) {
  return static_cast<std::size_t>(std::ceil(std::log(1.0 / alpha) / std::log(kIncrementFactor))) + 1;
}

/// Iterates increment_step from Gamma_0 = {0}, B_0 = Z_N until Found.
/// f must take values in [0, 1]; `normalization` only feeds the raw
/// thresholds recorded in the trace.
template <ZnReal Fn>
IterationTrace iterate_increment(const Fn& f, double sigma, double c0,
                                 std::optional<std::size_t> max_steps = std::nullopt,
                                 double normalization = 1.0) {
  const std::size_t n = f.modulus();
  for (double v : f.values()) {
    if (v < -tol::kCertificateAbs || v > 1.0 + tol::kCertificateAbs) {
      throw std::invalid_argument("iterate_increment: f must take values in [0,1]");
    }
  }
  IterationTrace trace;
  trace.normalization = normalization;
  trace.initial_alpha = f.mean();
  if (!(trace.initial_alpha > 0.0)) throw std::invalid_argument("iterate_increment: E f must be positive");
  trace.step_bound = increment_step_bound(trace.initial_alpha);
  const std::size_t limit = max_steps.value_or(trace.step_bound);

  // delta_0: top of the grid below 1 for Gamma_0 = {0}; every translate of
  // B_0 = Z_N has the same mean, so b_0 = 0.
  const BohrProfile base(n, {0});
  std::optional<BohrSet> b = regular_bohr_set(base, 1.0, c0, 0);
  if (!b) throw std::logic_error("iterate_increment: rank-0 Bohr set reported irregular");

  for (std::size_t k = 0; k < limit; ++k) {
    std::vector<double> restricted(n, 0.0);
    for (std::size_t x : b->elements) restricted[x] = f[x];
    const DensityFunction fk(std::move(restricted));
    StepRecord rec;
    rec.k = k;
    rec.gamma_size = b->frequencies.size();
    rec.delta = b->radius;
    rec.alpha = detail::mean_on(f, *b);
    rec.b_size = b->size();
    rec.threshold = rec.alpha * rec.alpha / 2.0 * static_cast<double>(b->size());
    rec.raw_threshold = rec.threshold * normalization * normalization;
    if (!trace.steps.empty() && rec.alpha < trace.steps.back().alpha * kIncrementFactor) {
      trace.anomalies.push_back("step " + std::to_string(k) + ": alpha growth below 33/32");
    }
    IncrementOutcome out = increment_step(fk, *b, sigma, c0);
    rec.outcome = outcome_tag(out);
    if (auto* inc = std::get_if<DensityIncrement>(&out)) {
      rec.lambda_size = inc->lambda.size();
      rec.large_spectrum_size = inc->large_spectrum_size;
      rec.energy = inc->energy;
      rec.energy_budget = inc->energy_budget;
      rec.cap_bound = inc->cap_bound;
      rec.radius_fallbacks = inc->radius_fallbacks;
      if (inc->cap_bound) trace.anomalies.push_back("step " + std::to_string(k) + ": frequency cap bound");
      trace.steps.push_back(rec);
      b = std::move(inc->bdoubleprime);
      continue;
    }
    trace.steps.push_back(rec);
    if (auto* found = std::get_if<FoundPair>(&out)) {
      trace.terminal = std::move(*found);
    } else {
      trace.failure = std::get<IncrementFailure>(out);
      trace.anomalies.push_back("step " + std::to_string(k) + ": " + trace.failure->message);
    }
    break;
  }
  if (!trace.terminal && !trace.failure) {
    trace.nonterminal = true;
    trace.anomalies.push_back("no Found outcome within " + std::to_string(limit) + " steps");
  }
  if (trace.steps.size() > trace.step_bound) {
    trace.anomalies.push_back("step count exceeds the growth bound");
  }
  return trace;
}

}  // namespace randstruct
