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
#include "randstruct/increment.hpp"

namespace randstruct {
namespace {

// Indicator of a rank-one Bohr neighbourhood, optionally thinned; its
// self-convolution is concentrated, so the Found test fails on Z_N.
DensityFunction clustered(std::size_t n, std::size_t xi, double delta, double keep, std::uint64_t seed) {
  oracle::Gen gen(seed);
  std::vector<double> v(n, 0.0);
  for (std::size_t x : oracle::naive_bohr(n, {xi}, delta)) v[x] = gen.uniform() < keep ? 1.0 : 0.0;
  v[0] = 1.0;
  return DensityFunction(std::move(v));
}

double recount_mean(const DensityFunction& f, const BohrSet& b) {
  const auto elems = oracle::naive_bohr(b.modulus, b.frequencies, b.radius, b.shift);
  EXPECT_EQ(elems, b.elements);
  double s = 0.0;
  for (std::size_t x : elems) s += f[x];
  return s / static_cast<double>(elems.size());
}

TEST(IncrementStep, ConstantFunctionIsFoundImmediately) {
  const std::size_t n = 101;
  const BohrSet b = bohr_elements(n, {0}, 0.99);
  const auto out = increment_step(DensityFunction::constant(n, 1.0), b, 0.1, 0.1);
  ASSERT_TRUE(std::holds_alternative<FoundPair>(out));
  EXPECT_DOUBLE_EQ(std::get<FoundPair>(out).good_fraction, 1.0);
}

TEST(IncrementStep, ClusteredFunctionIncrementsSoundly) {
  for (std::size_t n : {211u, 1009u}) {
    const DensityFunction f = clustered(n, 7, 0.4, 1.0, 1);
    const BohrSet b = bohr_elements(n, {0}, 0.99);
    const double sigma = 0.05;
    const auto out = increment_step(f, b, sigma, 0.1);
    ASSERT_TRUE(std::holds_alternative<DensityIncrement>(out)) << outcome_tag(out);
    const DensityIncrement& inc = std::get<DensityIncrement>(out);
    EXPECT_GE(recount_mean(f, inc.bdoubleprime), inc.alpha * kIncrementFactor);
    EXPECT_NEAR(recount_mean(f, inc.bdoubleprime), inc.new_mean, 1e-12);
    ASSERT_TRUE(inc.bdoubleprime.regularity.has_value());
    EXPECT_TRUE(inc.bdoubleprime.regularity->regular);
    EXPECT_LE(inc.large_spectrum_size, inc.large_spectrum_bound + 1e-9);
    EXPECT_FALSE(inc.lambda.empty());
    const double cutoff = static_cast<double>(inc.bprime.size()) * sigma;
    EXPECT_EQ(inc.witness_size, static_cast<std::size_t>(std::ceil(cutoff - 1e-9)));
  }
}

TEST(IncrementStep, RejectsInvalidInput) {
  const std::size_t n = 31;
  const BohrSet small = bohr_elements(n, {1}, 0.5);
  EXPECT_THROW(increment_step(DensityFunction::constant(n, 1.0), small, 0.1, 0.1), std::invalid_argument);
  const BohrSet whole = bohr_elements(n, {0}, 0.99);
  EXPECT_THROW(increment_step(DensityFunction::constant(n, 2.0), whole, 0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(increment_step(DensityFunction::constant(n, 1.0), whole, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(increment_step(DensityFunction::constant(n, 0.0), whole, 0.1, 0.1), std::invalid_argument);
}

TEST(WitnessSet, SmallestSubThresholdPoints) {
  const BohrSet bp = bohr_elements(7, {0}, 0.99);
  const BalancedFunction conv({5.0, 0.5, 3.0, 0.1, 9.0, 0.5, 2.0});
  const ResidueSet s = witness_set(conv, bp, 2.5, 0.4);
  EXPECT_EQ(s.elements(), (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_THROW(witness_set(conv, bp, 0.2, 0.4), std::logic_error);
}

TEST(SelectFrequencies, SkipsGammaAndRespectsCap) {
  oracle::Gen gen(61);
  const std::size_t n = 97;
  std::vector<std::complex<double>> c(n);
  for (auto& z : c) z = {gen.uniform(), 0.0};
  const Spectrum s{c};
  std::vector<std::size_t> large;
  for (std::size_t xi = 0; xi < n; ++xi) large.push_back(xi);
  const auto sel = select_frequencies(s, large, {5}, 4);
  EXPECT_EQ(sel.lambda.size(), 4u);
  EXPECT_TRUE(sel.cap_bound);
  for (std::size_t xi : sel.lambda) {
    EXPECT_NE(xi, 0u);
    EXPECT_NE(xi, 5u);
    EXPECT_NE(xi, n - 5);
  }
  for (std::size_t i = 0; i < sel.lambda.size(); ++i) {
    for (std::size_t j = i + 1; j < sel.lambda.size(); ++j) {
      EXPECT_NE((sel.lambda[i] + sel.lambda[j]) % n, 0u);
    }
  }
}

TEST(BalancedFunction, MeanZeroOnB) {
  const std::size_t n = 53;
  const BohrSet b = bohr_elements(n, {3}, 0.8);
  std::vector<double> v(n, 0.0);
  oracle::Gen gen(62);
  for (std::size_t x : b.elements) v[x] = gen.uniform();
  const BalancedFunction g = balanced_function(DensityFunction(v), b);
  double s = 0.0;
  for (std::size_t x = 0; x < n; ++x) s += g[x];
  EXPECT_NEAR(s, 0.0, 1e-12);
}

TEST(Iterate, TerminatesWithinStepBoundAndRecounts) {
  for (std::size_t n : {211u, 1009u}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const DensityFunction f = clustered(n, 3 + seed, 0.3 + 0.1 * seed, 0.9, seed);
      const double sigma = 0.05;
      const IterationTrace t = iterate_increment(f, sigma, 0.1);
      ASSERT_TRUE(t.terminal.has_value()) << "N=" << n << " seed=" << seed;
      EXPECT_LE(t.steps.size(), t.step_bound);
      EXPECT_EQ(t.step_bound, increment_step_bound(f.mean()));
      for (std::size_t i = 1; i < t.steps.size(); ++i) {
        EXPECT_GE(t.steps[i].alpha, t.steps[i - 1].alpha * kIncrementFactor);
      }
      // Independent recount of the Found condition on f restricted to B.
      const FoundPair& fp = *t.terminal;
      std::vector<double> fk(n, 0.0);
      for (std::size_t x : fp.b.elements) fk[x] = f[x];
      const auto conv = oracle::naive_convolve(fk, fk);
      const auto bprime = oracle::naive_bohr(n, fp.bprime.frequencies, fp.bprime.radius, fp.bprime.shift);
      std::size_t good = 0;
      for (std::size_t x : bprime) good += conv[x] >= fp.threshold * (1 - 1e-9) ? 1 : 0;
      EXPECT_EQ(good, fp.good_count);
      EXPECT_GE(static_cast<double>(good), (1 - sigma) * static_cast<double>(bprime.size()) - 1e-9);
      EXPECT_NEAR(recount_mean(f, fp.b), fp.alpha, 1e-12);
    }
  }
}

TEST(Iterate, CsvContract) {
  const IterationTrace t = iterate_increment(DensityFunction::constant(31, 0.5), 0.1, 0.1);
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,gamma_size,delta,alpha,outcome");
  EXPECT_NE(csv.find(",found\n"), std::string::npos);
  EXPECT_THROW(iterate_increment(DensityFunction::constant(31, 1.5), 0.1, 0.1), std::invalid_argument);
}

TEST(Iterate, StepBoundFormula) {
  EXPECT_EQ(increment_step_bound(1.0), 1u);
  EXPECT_EQ(increment_step_bound(0.5), static_cast<std::size_t>(std::ceil(std::log(2.0) / std::log(33.0 / 32.0))) + 1);
}

}  // namespace
}  // namespace randstruct
