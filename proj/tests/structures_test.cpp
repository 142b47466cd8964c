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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "randstruct/structures.hpp"

namespace randstruct {
namespace {

TEST(PowerIndicator, SmallModulusExamples) {
  EXPECT_EQ(power_indicator(31, 2).support.elements(), (std::vector<std::size_t>{1, 4, 9}));
  EXPECT_EQ(power_indicator(31, 3).support.elements(), (std::vector<std::size_t>{1, 8}));
  EXPECT_EQ(power_indicator(31, 2).range, 3u);
  EXPECT_THROW(power_indicator(31, 1), std::invalid_argument);
}

TEST(PowerIndicator, RangeIsLargestAdmissible) {
  for (std::size_t n = 1; n < 3000; n += 7) {
    for (unsigned k : {2u, 3u, 4u}) {
      const std::size_t r = power_range(n, k);
      EXPECT_LE(3 * std::pow(double(r), k), double(n));
      EXPECT_GT(3 * std::pow(double(r + 1), k), double(n));
    }
  }
}

TEST(PowerDifference, SmallExample) {
  EXPECT_EQ(power_difference_count(ResidueSet::from_elements(31, {1, 2, 5}), 2), 2u);
}

TEST(PowerDifference, MatchesBruteForceAndVarnavidesIdentity) {
  oracle::Gen gen(41);
  for (int t = 0; t < 120; ++t) {
    const std::size_t n = gen.prime_between(5, 2003);
    const unsigned k = 2 + static_cast<unsigned>(gen.below(3));
    const auto a = gen.subset(n, gen.uniform(0.01, 0.6));
    const ResidueSet s = ResidueSet::from_elements(n, a);
    const std::uint64_t brute = oracle::brute_power_pairs(n, a, k);
    EXPECT_EQ(power_difference_count(s, k), brute);
    const double range = double(power_range(n, k));
    if (range > 0) {
      EXPECT_NEAR(varnavides_average(s.indicator(), k) * n * range, double(brute), 1e-6);
    }
  }
}

TEST(Varnavides, MatchesDirectDoubleAverage) {
  oracle::Gen gen(42);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = gen.prime_between(30, 400);
    const auto v = gen.values(n, 0.0, 2.0);
    const std::size_t range = power_range(n, 2);
    double direct = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t r = 1; r <= range; ++r) direct += v[x] * v[(x + r * r) % n];
    }
    direct /= double(n * range);
    EXPECT_NEAR(varnavides_average(DensityFunction(v), 2), direct, 1e-10);
  }
}

TEST(Sumset, MatchesPairwiseSums) {
  oracle::Gen gen(43);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + gen.below(500);
    const auto a = gen.subset(n, gen.uniform(0.0, 0.3)), b = gen.subset(n, gen.uniform(0.0, 0.3));
    const auto got = sumset(ResidueSet::from_elements(n, a), ResidueSet::from_elements(n, b)).elements();
    EXPECT_EQ(got, oracle::naive_sumset(n, a, b));
  }
}

TEST(LongestAp, SmallExampleAndSingleton) {
  const ApWitness w = longest_ap(ResidueSet::from_elements(11, {1, 2, 3, 7}));
  EXPECT_EQ(w.length, 3u);
  EXPECT_EQ(w.start, 1u);
  EXPECT_EQ(w.step, 1u);
  const ApWitness one = longest_ap(ResidueSet::from_elements(11, {6}));
  EXPECT_EQ(one.start, 6u);
  EXPECT_EQ(one.step, 1u);
  EXPECT_EQ(one.length, 1u);
  EXPECT_THROW(longest_ap(ResidueSet(11)), std::invalid_argument);
}

TEST(LongestAp, MatchesExhaustiveSearchAndSieve) {
  oracle::Gen gen(44);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 1 + gen.below(180);
    auto a = gen.subset(n, gen.uniform(0.05, 0.95));
    if (a.empty()) a.push_back(gen.below(n));
    const ResidueSet s = ResidueSet::from_elements(n, a);
    const auto o = oracle::exhaustive_longest_ap(n, a);
    const ApWitness scan = longest_ap_scan(s), sieve = longest_ap_sieve(s);
    EXPECT_EQ(scan.length, o.length) << "N=" << n;
    EXPECT_EQ(scan.step, o.step) << "N=" << n;
    EXPECT_EQ(scan.start, o.start) << "N=" << n;
    EXPECT_EQ(sieve.length, scan.length);
    EXPECT_EQ(sieve.step, scan.step);
    EXPECT_EQ(sieve.start, scan.start);
    EXPECT_TRUE(scan.lies_in(s));
  }
}

TEST(SpectralError, ChainHoldsAndExactMatchesNaive) {
  oracle::Gen gen(45);
  for (unsigned k : {2u, 3u}) {
    const std::size_t n = 211;
    const auto v = gen.values(n, -1.0, 1.0);
    const PowerIndicator pk = power_indicator(n, k);
    const SpectralErrorTerm e = spectral_error_term(BalancedFunction(v), pk);
    EXPECT_TRUE(e.chain_holds);
    const auto fh = oracle::naive_dft(v);
    std::vector<double> ind(n, 0.0);
    for (std::size_t x : pk.support.elements()) ind[x] = 1.0;
    const auto ph = oracle::naive_dft(ind);
    double exact = 0.0;
    for (std::size_t xi = 0; xi < n; ++xi) exact += std::norm(fh[xi]) * std::abs(ph[xi]);
    EXPECT_NEAR(e.exact, exact, 1e-10);
    EXPECT_NEAR(e.restriction_q, (12.0 * k - 1) / (6.0 * k - 1), 1e-15);
  }
}

TEST(SquareIndicator, TwelfthMomentBound) {
  for (std::size_t n : {101u, 1009u, 2003u}) {
    const double norm = spectral_lq_norm(dft(power_indicator(n, 2).indicator()), 12.0);
    EXPECT_LE(norm, square_indicator_bound(n));
  }
}

TEST(L2ErrorOnBohr, MatchesDirectConvolution) {
  oracle::Gen gen(46);
  const std::size_t n = 61;
  const auto a = gen.values(n, 0.0, 1.0), b = gen.values(n, -1.0, 1.0);
  const BohrSet bp = bohr_elements(n, {3}, 0.7);
  const auto conv = oracle::naive_convolve(a, b);
  double direct = 0.0;
  for (std::size_t x : bp.elements) direct += conv[x] * conv[x];
  EXPECT_NEAR(l2_error_on_bohr(DensityFunction(a), BalancedFunction(b), bp), direct, 1e-9);
}

TEST(Primality, AgreesWithTrialDivision) {
  for (std::size_t n = 0; n < 5000; ++n) EXPECT_EQ(is_prime(n), oracle::is_prime(n)) << n;
}

}  // namespace
}  // namespace randstruct
