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
#include "randstruct/random_model.hpp"

namespace randstruct {
namespace {

TEST(Rng, DeterministicAndInUnitInterval) {
  double sum = 0.0;
  for (std::uint64_t c = 0; c < 20000; ++c) {
    const double u = rng::uniform(42, rng::kMembership, c);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_EQ(u, rng::uniform(42, rng::kMembership, c));
    sum += u;
  }
  EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
  EXPECT_NE(rng::word(1, 0, 0), rng::word(1, 1, 0));
  EXPECT_NE(rng::word(1, 0, 0), rng::word(2, 0, 0));
}

TEST(SampleW, MembershipIsTheCoordinateRule) {
  const auto s = sample_w(1009, 0.3, 7);
  for (std::size_t x = 0; x < 1009; ++x) {
    EXPECT_EQ(s.w.contains(x), rng::uniform(7, rng::kMembership, x) < 0.3);
  }
  EXPECT_EQ(sample_w(1009, 0.3, 7).w, s.w);
  EXPECT_EQ(sample_w(50, 1.0, 3).w.size(), 50u);
}

TEST(SampleW, SizeConcentrates) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 10007;
    const double p = 0.2;
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(sample_w(n, p, seed).w.size()), n * p, 5 * sd);
  }
}

TEST(SampleW, RejectsBadParameters) {
  EXPECT_THROW(sample_w(0, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(sample_w(10, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_w(10, 1.5, 1), std::invalid_argument);
  EXPECT_THROW(adversarial_subset(sample_w(10, 0.5, 1), 0.0, SubsetStrategy::kUniformRandom),
               std::invalid_argument);
}

TEST(Strategy, NamesRoundTrip) {
  for (auto s : {SubsetStrategy::kUniformRandom, SubsetStrategy::kProgressionIntersect,
                 SubsetStrategy::kSquareDifferenceFreeGreedy}) {
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  }
  EXPECT_THROW(parse_strategy("nope"), std::invalid_argument);
}

TEST(Strategy, UniformHitsTargetInsideW) {
  oracle::Gen gen(31);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = gen.prime_between(50, 3000);
    const double alpha = gen.uniform(0.05, 1.0);
    const auto s = adversarial_subset(sample_w(n, gen.uniform(0.1, 1.0), t), alpha, SubsetStrategy::kUniformRandom);
    EXPECT_TRUE(s.a->is_subset_of(s.w));
    EXPECT_EQ(s.a->size(), static_cast<std::size_t>(std::ceil(alpha * s.w.size() - 1e-9)));
    EXPECT_FALSE(s.shortfall);
  }
}

TEST(Strategy, ProgressionShiftIsOptimal) {
  oracle::Gen gen(32);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = gen.prime_between(20, 300);
    const double alpha = gen.uniform(0.1, 0.9);
    const auto s = adversarial_subset(sample_w(n, 0.5, t), alpha, SubsetStrategy::kProgressionIntersect);
    const ProgressionChoice pc = *s.progression;
    auto hits = [&](std::size_t shift) {
      std::size_t c = 0;
      for (std::size_t i = 0; i < pc.distinct; ++i) c += s.w.contains((shift + i * pc.step) % n) ? 1 : 0;
      return c;
    };
    std::size_t best = 0;
    for (std::size_t x = 0; x < n; ++x) best = std::max(best, hits(x));
    EXPECT_EQ(s.a->size(), best);
    EXPECT_EQ(hits(pc.shift), best);
    for (std::size_t x : s.a->elements()) {
      bool on = false;
      for (std::size_t i = 0; i < pc.distinct && !on; ++i) on = (pc.shift + i * pc.step) % n == x;
      EXPECT_TRUE(on);
    }
  }
}

TEST(Strategy, GreedyAvoidsPowerDifferences) {
  for (unsigned k : {2u, 3u}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto s = adversarial_subset(sample_w(1009, 0.4, seed), 0.4, SubsetStrategy::kSquareDifferenceFreeGreedy, k);
      EXPECT_TRUE(s.a->is_subset_of(s.w));
      EXPECT_EQ(oracle::brute_power_pairs(1009, s.a->elements(), k), 0u);
      EXPECT_EQ(s.shortfall, s.a->size() < s.target_size);
    }
  }
}

TEST(Certificate, EtaAndPlancherelAgainstNaiveTransform) {
  const auto s = adversarial_subset(sample_w(211, 0.4, 5), 0.5, SubsetStrategy::kUniformRandom);
  const Measures m = build_measures(s);
  const auto c = certify_pseudorandom(m.nu, *m.f, 2.0, 10.0, default_eta_budget(211));
  std::vector<double> nu(m.nu.values().begin(), m.nu.values().end());
  const auto nh = oracle::naive_dft(nu);
  double eta = std::abs(nh[0] - 1.0);
  for (std::size_t xi = 1; xi < nh.size(); ++xi) eta = std::max(eta, std::abs(nh[xi]));
  EXPECT_NEAR(c.eta, eta, 1e-12);
  EXPECT_TRUE(c.plancherel_ok);
  EXPECT_NEAR(c.l2_norm_sq, s.a->size() / (0.16 * 211), 1e-9);
  EXPECT_NEAR(c.restriction_norm, std::sqrt(c.l2_norm_sq), 1e-9);
  EXPECT_NEAR(default_eta_budget(100000), 3.0 / 10.0, 1e-12);
}

}  // namespace
}  // namespace randstruct
