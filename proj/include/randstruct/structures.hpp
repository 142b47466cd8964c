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

// Arithmetic-structure detectors on Z_N: power indicators and power
// difference counts, the restricted-range pair average, sumsets, longest
// arithmetic progressions, and the two Fourier-side error terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "randstruct/bohr.hpp"
#include "randstruct/fourier.hpp"
#include "randstruct/residue_set.hpp"
#include "randstruct/tolerance.hpp"

namespace randstruct {

inline bool is_prime(std::size_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::size_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// floor((N/3)^{1/k}) computed exactly as max r with 3 r^k <= N.
inline std::size_t power_range(std::size_t modulus, unsigned k) {
  if (k < 2) throw std::invalid_argument("power_range: exponent k must be >= 2");
  auto fits = [&](std::uint64_t r) {
    std::uint64_t pw = 1;
    for (unsigned e = 0; e < k; ++e) {
      pw *= r;
      if (3 * pw > modulus) return false;
    }
    return true;
  };
  std::uint64_t r = 0;
  while (fits(r + 1)) ++r;
  return static_cast<std::size_t>(r);
}

/// Indicator of {r^k mod N : 1 <= r <= floor((N/3)^{1/k})}.
struct PowerIndicator {
  std::size_t modulus = 0;
  unsigned exponent = 2;
  std::size_t range = 0;             // floor((N/3)^{1/k})
  std::vector<std::size_t> powers;   // r^k mod N for r = 1..range, in r order
  ResidueSet support;
  bool modulus_prime = true;  // non-prime moduli are allowed but flagged
  bool collisions = false;    // two r with equal r^k mod N

  DensityFunction indicator() const { return support.indicator(); }
};

inline PowerIndicator power_indicator(std::size_t modulus, unsigned k) {
  if (k < 2) throw std::invalid_argument("power_indicator: exponent k must be >= 2");
  if (modulus == 0) throw std::invalid_argument("power_indicator: modulus must be at least 1");
  PowerIndicator pi;
  pi.modulus = modulus;
  pi.exponent = k;
  pi.range = power_range(modulus, k);
  pi.support = ResidueSet(modulus);
  pi.modulus_prime = is_prime(modulus);
  for (std::size_t r = 1; r <= pi.range; ++r) {
    std::uint64_t pw = 1;
    for (unsigned e = 0; e < k; ++e) pw *= r;
    const auto v = static_cast<std::size_t>(pw % modulus);
    if (pi.support.contains(v)) pi.collisions = true;
    pi.support.insert(v);
    pi.powers.push_back(v);
  }
  return pi;
}

/// Ordered pairs (x, x + r^k) with both in A, over 1 <= r <= floor((N/3)^{1/k}).
inline std::uint64_t power_difference_count(const ResidueSet& a, unsigned k) {
  const std::size_t n = a.modulus();
  const std::size_t range = power_range(n, k);
  std::uint64_t count = 0;
  if (a.size() < 2) return 0;
  for (std::size_t r = 1; r <= range; ++r) {
    std::uint64_t pw = 1;
    for (unsigned e = 0; e < k; ++e) pw *= r;
    const std::size_t s = static_cast<std::size_t>(pw % n);
    // (A - s)[x] = A[x + s]
    count += a.intersection_size(a.rotated(n - s));
  }
  return count;
}

/// E( f(n) f(n + r^k) | n in Z_N, 1 <= r <= floor((N/3)^{1/k}) ).
///
/// Evaluated as sum_x f(x) (f correlated with the power indicator)(x),
/// touching only the support of the indicator.
template <ZnReal Fn>
double varnavides_average(const Fn& f, unsigned k) {
  const std::size_t n = f.modulus();
  const PowerIndicator pi = power_indicator(n, k);
  if (pi.range == 0) return 0.0;
  const auto vals = f.values();
  double total = 0.0;
  for (std::size_t s : pi.powers) {
    double acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t y = x + s < n ? x + s : x + s - n;
      acc += vals[x] * vals[y];
    }
    total += acc;
  }
  return total / (static_cast<double>(n) * static_cast<double>(pi.range));
}

/// A + B in Z_N.
inline ResidueSet sumset(const ResidueSet& a, const ResidueSet& b) {
  detail::require_same_modulus(a.modulus(), b.modulus(), "sumset");
  const bool a_small = a.size() <= b.size();
  const ResidueSet& small = a_small ? a : b;
  const ResidueSet& large = a_small ? b : a;
  ResidueSet out(a.modulus());
  for (std::size_t x : small.elements()) out |= large.rotated(x);
  return out;
}

/// start, start+step, ..., start+(length-1)*step (mod N).
struct ApWitness {
  std::size_t start = 0;
  std::size_t step = 1;
  std::size_t length = 0;

  std::vector<std::size_t> terms(std::size_t modulus) const {
    std::vector<std::size_t> out(length);
    for (std::size_t i = 0; i < length; ++i) {
      out[i] = static_cast<std::size_t>(
          (start + static_cast<std::uint64_t>(i) * step) % modulus);
    }
    return out;
  }
  bool lies_in(const ResidueSet& s) const {
    for (std::size_t x : terms(s.modulus())) {
      if (!s.contains(x)) return false;
    }
    return true;
  }
};

/// Exhaustive search is used up to this modulus; larger moduli use the sieve.
inline constexpr std::size_t kLongestApScanCap = 200000;

namespace detail {

inline void require_nonempty(const ResidueSet& s) {
  if (s.empty()) throw std::invalid_argument("longest_ap: set must be nonempty");
}

// Steps d and N-d describe the same progressions reversed, so only d <= N/2
// is visited; the smaller step always wins ties.
inline bool better(const ApWitness& cand, const ApWitness& best) {
  if (cand.length != best.length) return cand.length > best.length;
  if (cand.step != best.step) return cand.step < best.step;
  return cand.start < best.start;
}

}  // namespace detail

/// Longest AP by walking every coset cycle of every step and measuring runs.
/// O(N^2) bit tests with early exit once the whole set is one progression.
inline ApWitness longest_ap_scan(const ResidueSet& s) {
  detail::require_nonempty(s);
  const std::size_t n = s.modulus();
  const std::size_t total = s.size();
  ApWitness best{s.elements().front(), 1, 1};
  if (n == 1) return best;
  std::vector<unsigned char> bits;
  for (std::size_t d = 1; 2 * d <= n || d == 1; ++d) {
    if (best.length >= total) break;
    const std::size_t g = std::gcd(d, n);
    const std::size_t cycle = n / g;
    if (best.length >= cycle) continue;
    bits.resize(cycle);
    for (std::size_t r = 0; r < g; ++r) {
      std::size_t x = r;
      std::size_t members = 0;
      std::size_t first_gap = cycle;
      for (std::size_t i = 0; i < cycle; ++i) {
        bits[i] = s.contains(x) ? 1 : 0;
        members += bits[i];
        if (!bits[i] && first_gap == cycle) first_gap = i;
        x += d;
        if (x >= n) x -= n;
      }
      if (members == 0) continue;
      if (members == cycle) {
        const ApWitness cand{r, d, cycle};
        if (detail::better(cand, best)) best = cand;
        continue;
      }
      // Start just after a gap so that runs never straddle the walk origin.
      std::size_t run = 0;
      std::size_t run_start_idx = 0;
      for (std::size_t k = 1; k <= cycle; ++k) {
        const std::size_t i = (first_gap + k) % cycle;
        if (bits[i]) {
          if (run == 0) run_start_idx = i;
          ++run;
        }
        if (!bits[i] || k == cycle) {
          if (run > 0) {
            const std::size_t start = static_cast<std::size_t>(
                (r + static_cast<std::uint64_t>(run_start_idx) * d) % n);
            const ApWitness cand{start, d, run};
            if (detail::better(cand, best)) best = cand;
          }
          run = 0;
        }
      }
    }
  }
  return best;
}

/// Longest AP by iterated intersection T_j = S cap (S - d) cap ... cap (S - j d)
/// on packed bitsets. Produces the same witness as longest_ap_scan.
inline ApWitness longest_ap_sieve(const ResidueSet& s) {
  detail::require_nonempty(s);
  const std::size_t n = s.modulus();
  const std::size_t total = s.size();
  ApWitness best{s.elements().front(), 1, 1};
  if (n == 1) return best;
  for (std::size_t d = 1; 2 * d <= n || d == 1; ++d) {
    if (best.length >= total) break;
    const std::size_t cycle = n / std::gcd(d, n);
    if (best.length >= cycle) continue;
    ResidueSet t = s;
    std::size_t length = 1;
    while (length < cycle) {
      const std::size_t shift = static_cast<std::size_t>(
          (static_cast<std::uint64_t>(length) * d) % n);
      ResidueSet next = t & s.rotated(n - shift);
      if (next.empty()) break;
      t = std::move(next);
      ++length;
    }
    const ApWitness cand{t.elements().front(), d, length};
    if (detail::better(cand, best)) best = cand;
  }
  return best;
}

/// Longest arithmetic progression in S read mod N; ties go to the smallest
/// (step, start). A singleton yields {element, step 1, length 1}.
inline ApWitness longest_ap(const ResidueSet& s) {
  return s.modulus() <= kLongestApScanCap ? longest_ap_scan(s) : longest_ap_sieve(s);
}

/// Exact Fourier-side error term and its Holder bound chain:
///
///   exact  = sum_xi |f2^(xi)|^2 |P^(xi)|
///         <= ||P^||_{6k} (sum_xi |f2^|^{12k/(6k-1)})^{(6k-1)/6k}              (holder)
///         <= ||P^||_{6k} ||f2^||_q^{(12k-1)/6k} ||f2^||_inf^{1/6k}            (final)
///
/// with q = (12k-1)/(6k-1); k = 2 gives the exponents 12, 24/11, 23/11, 1/12.
struct SpectralErrorTerm {
  unsigned exponent = 2;
  double exact = 0.0;
  double holder_bound = 0.0;
  double final_bound = 0.0;
  double indicator_norm = 0.0;  // ||P^||_{6k}
  double restriction_q = 0.0;
  double f2_restriction_norm = 0.0;  // ||f2^||_q
  double f2_sup = 0.0;                // ||f2^||_inf
  bool chain_holds = false;
};

template <ZnReal Fn>
SpectralErrorTerm spectral_error_term(const Fn& f2, const PowerIndicator& indicator) {
  detail::require_same_modulus(f2.modulus(), indicator.modulus, "spectral_error_term");
  const double k = indicator.exponent;
  SpectralErrorTerm t;
  t.exponent = indicator.exponent;
  const Spectrum fh = dft(f2);
  const Spectrum ph = dft(indicator.indicator());
  std::vector<double> fm(fh.modulus());
  for (std::size_t xi = 0; xi < fh.modulus(); ++xi) {
    fm[xi] = std::abs(fh[xi]);
    t.exact += fm[xi] * fm[xi] * std::abs(ph[xi]);
  }
  const double conj = 12.0 * k / (6.0 * k - 1.0);
  t.restriction_q = (12.0 * k - 1.0) / (6.0 * k - 1.0);
  t.indicator_norm = spectral_lq_norm(ph, 6.0 * k);
  t.f2_restriction_norm = lq_norm(fm, t.restriction_q);
  t.f2_sup = lq_norm(fm, kInfinity);
  const double conj_norm = lq_norm(fm, conj);  // (sum |f2^|^conj)^{1/conj}
  t.holder_bound = t.indicator_norm * conj_norm * conj_norm;
  t.final_bound = t.indicator_norm *
                  std::pow(t.f2_restriction_norm, (12.0 * k - 1.0) / (6.0 * k)) *
                  std::pow(t.f2_sup, 1.0 / (6.0 * k));
  const double slack = tol::kCertificateAbs * std::max(1.0, t.final_bound);
  t.chain_holds = t.exact <= t.holder_bound + slack && t.holder_bound <= t.final_bound + slack;
  return t;
}

/// 2^{19/12} N^{-1/2}, the six-squares bound for ||S^||_12.
inline double square_indicator_bound(std::size_t modulus) {
  return std::pow(2.0, 19.0 / 12.0) / std::sqrt(static_cast<double>(modulus));
}

/// sum_{x in B'} (fi * f2)(x)^2.
template <ZnReal Fi, ZnReal F2>
double l2_error_on_bohr(const Fi& fi, const F2& f2, const BohrSet& bprime) {
  detail::require_same_modulus(fi.modulus(), f2.modulus(), "l2_error_on_bohr");
  detail::require_same_modulus(fi.modulus(), bprime.modulus, "l2_error_on_bohr");
  const auto conv = convolve(fi, f2);
  double total = 0.0;
  for (std::size_t x : bprime.elements) total += conv[x] * conv[x];
  return total;
}

}  // namespace randstruct
