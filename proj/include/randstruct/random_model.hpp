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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "randstruct/fourier.hpp"
#include "randstruct/residue_set.hpp"

namespace randstruct {

// ---------------------------------------------------------------------------
// Counter-based generator
//
// Every random decision is a pure function of (seed, stream, counter):
//
//   key  = mix64(seed + stream * 0xD1B54A32D192ED03)
//   word = mix64(key ^ (counter * 0x9E3779B97F4A7C15 + 0x632BE59BD9B4E019))
//   u    = (word >> 11) * 2^-53                      in [0, 1)
//
// where mix64 is the SplitMix64 finalizer (Stafford variant 13). All
// arithmetic is unsigned 64-bit with wraparound, so the output is identical
// on every platform and independent of evaluation order.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kRngSpec =
    "splitmix64-keyed/v1: key=mix64(seed+stream*0xD1B54A32D192ED03); "
    "word=mix64(key^(counter*0x9E3779B97F4A7C15+0x632BE59BD9B4E019)); u=(word>>11)*2^-53";

namespace rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t counter) noexcept {
  const std::uint64_t key = mix64(seed + stream * 0xD1B54A32D192ED03ULL);
  return mix64(key ^ (counter * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
}

inline constexpr double uniform(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter) noexcept {
  return static_cast<double>(word(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Streams in use; new streams must take fresh ids.
enum Stream : std::uint64_t {
  kMembership = 0,
  kUniformSubset = 1,
  kGreedyOrder = 2,
  kTestData = 3,
};

/// Elements of `items` sorted by their keyed hash; ties (astronomically
/// unlikely) break by value.
inline std::vector<std::size_t> keyed_order(std::vector<std::size_t> items, std::uint64_t seed,
                                            std::uint64_t stream) {
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(items.size());
  for (std::size_t x : items) keyed.emplace_back(word(seed, stream, x), x);
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t i = 0; i < keyed.size(); ++i) items[i] = keyed[i].second;
  return items;
}

}  // namespace rng

enum class SubsetStrategy { kUniformRandom, kProgressionIntersect, kSquareDifferenceFreeGreedy };

inline std::string_view to_string(SubsetStrategy s) {
  switch (s) {
    case SubsetStrategy::kUniformRandom:
      return "uniform-random";
    case SubsetStrategy::kProgressionIntersect:
      return "progression-intersect";
    case SubsetStrategy::kSquareDifferenceFreeGreedy:
      return "square-difference-free-greedy";
  }
  return "unknown";
}

inline SubsetStrategy parse_strategy(std::string_view name) {
  if (name == "uniform-random") return SubsetStrategy::kUniformRandom;
  if (name == "progression-intersect") return SubsetStrategy::kProgressionIntersect;
  if (name == "square-difference-free-greedy") return SubsetStrategy::kSquareDifferenceFreeGreedy;
  throw std::invalid_argument("unknown subset strategy '" + std::string(name) + "'");
}

/// The progression used by the progression-intersect strategy.
struct ProgressionChoice {
  std::size_t step = 0;      // ceil(1/alpha)
  std::size_t length = 0;    // ceil(alpha N), capped at N
  std::size_t distinct = 0;  // |P| as a subset of Z_N
  std::size_t shift = 0;     // x maximizing |W cap (P + x)|
};

struct RandomSetSample {
  std::size_t modulus = 0;
  double p = 1.0;
  double theta = 0.0;  // informational: p = N^{-theta}
  std::uint64_t seed = 0;
  ResidueSet w;
  std::optional<ResidueSet> a;
  std::optional<SubsetStrategy> strategy;
  std::size_t target_size = 0;  // ceil(alpha |W|) requested
  bool shortfall = false;       // |A| < target under the strategy
  std::optional<ProgressionChoice> progression;

  std::optional<double> alpha() const {
    if (!a || w.empty()) return std::nullopt;
    return static_cast<double>(a->size()) / static_cast<double>(w.size());
  }
};

/// W: each x in Z_N kept independently with probability p.
inline RandomSetSample sample_w(std::size_t modulus, double p, std::uint64_t seed) {
  if (modulus == 0) throw std::invalid_argument("sample_w: modulus must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_w: p=" + std::to_string(p) + " outside (0,1]");
  }
  RandomSetSample s;
  s.modulus = modulus;
  s.p = p;
  s.theta = modulus > 1 ? -std::log(p) / std::log(static_cast<double>(modulus)) : 0.0;
  s.seed = seed;
  s.w = ResidueSet(modulus);
  for (std::size_t x = 0; x < modulus; ++x) {
    if (rng::uniform(seed, rng::kMembership, x) < p) s.w.insert(x);
  }
  return s;
}

struct Measures {
  DensityFunction nu;               // p^{-1} W
  std::optional<DensityFunction> f;  // p^{-1} A, when A is present
};

inline Measures build_measures(const RandomSetSample& sample) {
  if (!(sample.p > 0.0)) throw std::invalid_argument("build_measures: p must be positive");
  const double inv_p = 1.0 / sample.p;
  Measures m{sample.w.indicator(inv_p), std::nullopt};
  if (sample.a) m.f = sample.a->indicator(inv_p);
  return m;
}

/// Measured pseudorandomness quantities for a (nu, f) pair.
struct PseudorandomCertificate {
  double eta = 0.0;         // ||nu^ - 1_{xi=0}||_inf
  double eta_budget = 0.0;
  double l2_norm_sq = 0.0;  // ||f^||_2^2
  double plancherel_residual = 0.0;  // | ||f^||_2^2 - N^{-1} ||f||_2^2 |
  double restriction_q = 0.0;
  double restriction_norm = 0.0;  // ||f^||_q
  double restriction_budget = 0.0;
  bool eta_ok = false;
  bool restriction_ok = false;
  bool plancherel_ok = false;

  bool all_ok() const { return eta_ok && restriction_ok && plancherel_ok; }
};

/// ||nu^ - 1_{xi=0}||_inf from a precomputed spectrum.
inline double pseudorandom_eta(const Spectrum& nu_hat) {
  double eta = std::abs(nu_hat[0] - Complex(1.0, 0.0));
  for (std::size_t xi = 1; xi < nu_hat.modulus(); ++xi) eta = std::max(eta, std::abs(nu_hat[xi]));
  return eta;
}

inline double default_eta_budget(std::size_t modulus) {
  return 3.0 * std::pow(static_cast<double>(modulus), -0.2);
}

inline PseudorandomCertificate certify_pseudorandom(const DensityFunction& nu,
                                                    const DensityFunction& f, double q,
                                                    double m_budget, double eta_budget) {
  detail::require_same_modulus(nu.modulus(), f.modulus(), "certify_pseudorandom");
  PseudorandomCertificate c;
  c.eta = pseudorandom_eta(dft(nu));
  c.eta_budget = eta_budget;
  const Spectrum fh = dft(f);
  c.l2_norm_sq = 0.0;
  for (const Complex& z : fh.coeffs) c.l2_norm_sq += std::norm(z);
  double direct = 0.0;
  for (double v : f.values()) direct += v * v;
  direct /= static_cast<double>(f.modulus());
  c.plancherel_residual = std::abs(c.l2_norm_sq - direct);
  c.restriction_q = q;
  c.restriction_norm = spectral_lq_norm(fh, q);
  c.restriction_budget = m_budget;
  c.eta_ok = c.eta <= eta_budget;
  c.restriction_ok = c.restriction_norm <= m_budget;
  c.plancherel_ok = c.plancherel_residual <= tol::kTransformRel * std::max(1.0, direct);
  return c;
}

namespace detail {

inline std::size_t target_size(double alpha, std::size_t w_size) {
  // ceil with a guard so that alpha * |W| landing on an integer is not bumped.
  return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(w_size) - 1e-9));
}

/// Best shift x for |W cap (P + x)| with P = {0, s, ..., (L-1)s} mod N.
/// Sliding window along each coset cycle of the step; smallest x on ties.
inline ProgressionChoice best_progression_shift(const ResidueSet& w, std::size_t step,
                                                std::size_t length) {
  const std::size_t n = w.modulus();
  ProgressionChoice pc;
  pc.step = step;
  pc.length = length;
  const std::size_t s = step % n;
  const std::size_t g = std::gcd(s == 0 ? n : s, n);
  const std::size_t cycle = n / g;
  const std::size_t window = std::min(length, cycle);
  pc.distinct = window;
  std::vector<std::size_t> best_at(n, 0);
  std::vector<std::size_t> seq(cycle);
  std::vector<unsigned char> bits(cycle);
  for (std::size_t r = 0; r < g; ++r) {
    std::size_t x = r;
    for (std::size_t i = 0; i < cycle; ++i) {
      seq[i] = x;
      bits[i] = w.contains(x) ? 1 : 0;
      x = (x + s) % n;
    }
    std::size_t run = 0;
    for (std::size_t i = 0; i < window; ++i) run += bits[i];
    for (std::size_t i = 0; i < cycle; ++i) {
      best_at[seq[i]] = run;  // window starting at seq[i]
      run -= bits[i];
      run += bits[(i + window) % cycle];
    }
  }
  std::size_t best = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (best_at[x] > best_at[best]) best = x;
  }
  pc.shift = best;
  return pc;
}

}  // namespace detail

/// Chooses A inside W according to `strategy`.
///
/// uniform-random: the ceil(alpha|W|) elements of W with the smallest keyed
///   hash on the subset stream.
/// progression-intersect: A = W cap (P + x) for P of step ceil(1/alpha) and
///   length ceil(alpha N), with x maximizing the intersection.
/// square-difference-free-greedy: scans W in keyed order, keeping x whenever
///   x - a is not +-r^exponent mod N (1 <= r <= floor((N/3)^{1/exponent}))
///   for any kept a; stops at the target size.
inline RandomSetSample adversarial_subset(RandomSetSample sample, double alpha,
                                          SubsetStrategy strategy, unsigned exponent = 2) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("adversarial_subset: alpha=" + std::to_string(alpha) +
                                " outside (0,1]");
  }
  const std::size_t n = sample.modulus;
  const std::vector<std::size_t> w_elems = sample.w.elements();
  sample.target_size = detail::target_size(alpha, w_elems.size());
  sample.strategy = strategy;
  ResidueSet a(n);

  switch (strategy) {
    case SubsetStrategy::kUniformRandom: {
      const auto order = rng::keyed_order(w_elems, sample.seed, rng::kUniformSubset);
      for (std::size_t i = 0; i < sample.target_size && i < order.size(); ++i) a.insert(order[i]);
      break;
    }
    case SubsetStrategy::kProgressionIntersect: {
      const auto step = static_cast<std::size_t>(std::ceil(1.0 / alpha - 1e-12));
      const auto length = std::min<std::size_t>(
          n, static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) - 1e-9)));
      ProgressionChoice pc = detail::best_progression_shift(sample.w, step, std::max<std::size_t>(length, 1));
      for (std::size_t i = 0; i < pc.distinct; ++i) {
        const std::size_t x = (pc.shift + (i * (step % n)) % n) % n;
        if (sample.w.contains(x)) a.insert(x);
      }
      sample.progression = pc;
      break;
    }
    case SubsetStrategy::kSquareDifferenceFreeGreedy: {
      if (exponent < 2) throw std::invalid_argument("adversarial_subset: exponent must be >= 2");
      std::vector<std::size_t> shifts;
      for (std::uint64_t r = 1;; ++r) {
        std::uint64_t pw = 1;
        bool over = false;
        for (unsigned e = 0; e < exponent; ++e) {
          pw *= r;
          if (3 * pw > n) over = true;
        }
        if (over) break;
        shifts.push_back(static_cast<std::size_t>(pw % n));
      }
      ResidueSet forbidden(n);
      const auto order = rng::keyed_order(w_elems, sample.seed, rng::kGreedyOrder);
      std::size_t kept = 0;
      for (std::size_t x : order) {
        if (kept >= sample.target_size) break;
        if (forbidden.contains(x)) continue;
        a.insert(x);
        ++kept;
        for (std::size_t s : shifts) {
          forbidden.insert(x + s);
          forbidden.insert(x + n - s);
        }
      }
      break;
    }
  }
  sample.shortfall = a.size() < sample.target_size;
  sample.a = std::move(a);
  return sample;
}

}  // namespace randstruct
