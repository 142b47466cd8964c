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
#include "randstruct/fourier.hpp"

namespace randstruct {
namespace {

TEST(Dft, MatchesNaiveTransform) {
  oracle::Gen gen(1);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 13u, 64u, 101u, 257u, 512u}) {
    const auto v = gen.values(n, -2.0, 3.0);
    const Spectrum fast = dft(BalancedFunction(v));
    const auto slow = oracle::naive_dft(v);
    for (std::size_t xi = 0; xi < n; ++xi) {
      EXPECT_NEAR(std::abs(fast[xi] - slow[xi]), 0.0, 1e-10) << "N=" << n << " xi=" << xi;
    }
  }
}

TEST(Dft, DeltaAtZeroIsFlat) {
  const Spectrum s = dft(DensityFunction({1.0, 0.0, 0.0, 0.0}));
  for (std::size_t xi = 0; xi < 4; ++xi) EXPECT_NEAR(std::abs(s[xi] - Complex(0.25, 0.0)), 0.0, 1e-15);
}

TEST(Dft, ZeroFrequencyIsMean) {
  oracle::Gen gen(2);
  const auto v = gen.values(97, 0.0, 1.0);
  const DensityFunction f(v);
  EXPECT_NEAR(dft(f)[0].real(), f.mean(), 1e-12);
}

TEST(InverseDft, RoundTrip) {
  oracle::Gen gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + gen.below(300);
    const auto v = gen.values(n, -1.0, 1.0);
    const BalancedFunction back = inverse_dft(dft(BalancedFunction(v)));
    for (std::size_t x = 0; x < n; ++x) EXPECT_NEAR(back[x], v[x], 1e-9);
  }
}

TEST(Dft, PlancherelAndAdditivity) {
  oracle::Gen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + gen.below(400);
    const auto a = gen.values(n, -1.0, 1.0);
    const auto b = gen.values(n, -1.0, 1.0);
    const Spectrum fa = dft(BalancedFunction(a));
    const Spectrum fb = dft(BalancedFunction(b));
    std::vector<double> sum(n);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      sum[x] = a[x] + b[x];
      lhs += a[x] * a[x];
    }
    for (const Complex& z : fa.coeffs) rhs += std::norm(z);
    EXPECT_NEAR(lhs / static_cast<double>(n), rhs, 1e-9 * std::max(1.0, rhs));
    const Spectrum fs = dft(BalancedFunction(sum));
    for (std::size_t xi = 0; xi < n; ++xi) EXPECT_NEAR(std::abs(fs[xi] - fa[xi] - fb[xi]), 0.0, 1e-9);
  }
}

TEST(Convolve, MatchesDirectSumAndTransformIdentity) {
  oracle::Gen gen(5);
  for (std::size_t n : {7u, 16u, 31u, 100u}) {
    const auto a = gen.values(n, 0.0, 1.0);
    const auto b = gen.values(n, 0.0, 1.0);
    const DensityFunction f(a), g(b);
    const DensityFunction c = convolve(f, g);
    const auto direct = oracle::naive_convolve(a, b);
    for (std::size_t x = 0; x < n; ++x) EXPECT_NEAR(c[x], direct[x], 1e-9);
    const Spectrum fc = dft(c), ff = dft(f), fg = dft(g);
    for (std::size_t xi = 0; xi < n; ++xi) {
      EXPECT_NEAR(std::abs(fc[xi] - static_cast<double>(n) * ff[xi] * fg[xi]), 0.0, 1e-9);
    }
  }
}

TEST(Convolve, SignedInputGivesBalancedResult) {
  const BalancedFunction f({1.0, -1.0, 0.0});
  const DensityFunction g({1.0, 0.0, 0.0});
  const auto c = convolve(f, g);
  static_assert(std::is_same_v<std::remove_cvref_t<decltype(c)>, BalancedFunction>);
  EXPECT_DOUBLE_EQ(c[1], -1.0);
}

TEST(Convolve, ModulusMismatchNamesBoth) {
  try {
    (void)convolve(DensityFunction::constant(5, 1.0), DensityFunction::constant(7, 1.0));
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('5'), std::string::npos);
    EXPECT_NE(msg.find('7'), std::string::npos);
  }
}

TEST(Reflect, ConjugatesTheSpectrum) {
  oracle::Gen gen(6);
  const auto v = gen.values(23, 0.0, 2.0);
  const DensityFunction f(v);
  const Spectrum a = dft(reflect(f)), b = dft(f);
  for (std::size_t xi = 0; xi < 23; ++xi) EXPECT_NEAR(std::abs(a[xi] - std::conj(b[xi])), 0.0, 1e-12);
}

TEST(ZnFunction, RejectsBadValues) {
  EXPECT_THROW(DensityFunction({1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(BalancedFunction({1.0, std::nan("")}), std::invalid_argument);
  EXPECT_THROW(BalancedFunction(std::vector<double>{}), std::invalid_argument);
  EXPECT_NO_THROW(BalancedFunction({1.0, -0.5}));
}

TEST(ZnFunction, SnapsRoundingNoiseWhenNarrowing) {
  const BalancedFunction f({1.0, -1e-13, 0.5});
  const DensityFunction g = f.as<NonNegative>();
  EXPECT_EQ(g[1], 0.0);
  EXPECT_THROW((BalancedFunction({1.0, -0.1}).as<NonNegative>()), std::invalid_argument);
}

TEST(LqNorm, KnownValuesAndDomain) {
  const std::vector<double> v{3.0, 4.0};
  EXPECT_NEAR(lq_norm(v, 2.0), 5.0, 1e-12);
  EXPECT_NEAR(lq_norm(v, 1.0), 7.0, 1e-12);
  EXPECT_NEAR(lq_norm(v, kInfinity), 4.0, 0.0);
  EXPECT_THROW(lq_norm(v, 0.5), std::invalid_argument);
  const std::vector<double> tiny{1e-200, 1e-200};
  EXPECT_NEAR(lq_norm(tiny, 24.0) / 1e-200, std::pow(2.0, 1.0 / 24.0), 1e-12);
}

TEST(LqNorm, DecreasesInQ) {
  oracle::Gen gen(7);
  for (int t = 0; t < 50; ++t) {
    const auto v = gen.values(1 + gen.below(50), 0.0, 1.0);
    double prev = lq_norm(v, 1.0);
    for (double q : {1.5, 2.0, 19.0 / 9.0, 3.0, 12.0, 24.0}) {
      const double cur = lq_norm(v, q);
      EXPECT_LE(cur, prev + 1e-12);
      prev = cur;
    }
  }
}

}  // namespace
}  // namespace randstruct
