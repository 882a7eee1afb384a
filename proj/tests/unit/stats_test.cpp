// Copyright 2026 The blendsem Authors
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

#include "blendsem/stats.h"

#include <cmath>
#include <limits>
#include <random>

#include "blendsem/error.h"
#include "gtest/gtest.h"
#include "support/test_util.h"
#include "support/ttest_cases.h"

namespace blendsem {
namespace {

TEST(PairedTTestTest, MatchesFrozenReferenceCases) {
  for (const auto& c : testing::paired_cases()) {
    SCOPED_TRACE(c.name);
    const auto r = paired_ttest(c.a, c.b);
    EXPECT_EQ(r.n, c.a.size());
    EXPECT_NEAR(r.delta_mse, c.mean_diff, 1e-12);
    EXPECT_NEAR(r.t_statistic, c.t, 1e-6);
    EXPECT_NEAR(r.p_value, c.p, 1e-8 * c.p + 1e-300);
    EXPECT_FALSE(r.degenerate);
  }
}

TEST(PairedTTestTest, OneToFiveByHand) {
  const std::vector<double> d = {1, 2, 3, 4, 5};
  const std::vector<double> z(5, 0.0);
  const auto r = paired_ttest(d, z);
  EXPECT_NEAR(r.t_statistic, 3.0 * std::sqrt(5.0) / std::sqrt(2.5), 1e-12);
  EXPECT_NEAR(r.p_value, 0.0132, 1e-4);
}

TEST(StudentTTest, MatchesFrozenTailCases) {
  for (const auto& c : testing::tail_cases()) {
    SCOPED_TRACE(c.name);
    EXPECT_NEAR(student_t_two_sided(c.t, c.df), c.p, 1e-8 * c.p);
  }
}

TEST(StudentTTest, MonotoneInAbsT) {
  for (double df : {1.0, 4.0, 30.0, 4699.0}) {
    double prev = 1.0;
    for (double t = 0.0; t < 12.0; t += 0.25) {
      const double p = student_t_two_sided(t, df);
      EXPECT_LE(p, prev) << df << " " << t;
      EXPECT_GE(p, 0.0);
      EXPECT_EQ(p, student_t_two_sided(-t, df));
      prev = p;
    }
  }
  EXPECT_EQ(student_t_two_sided(0.0, 7.0), 1.0);
  EXPECT_EQ(student_t_two_sided(std::numeric_limits<double>::infinity(), 7.0), 0.0);
}

TEST(StudentTTest, OneDegreeIsCauchy) {
  for (double t : {0.3, 1.0, 2.5, 40.0}) {
    const double cauchy = 1.0 - 2.0 * std::atan(t) / M_PI;
    EXPECT_NEAR(student_t_two_sided(t, 1.0), cauchy, 1e-13);
  }
}

TEST(IncompleteBetaTest, ClosedForms) {
  // I_x(1, 1) = x;  I_x(a, 1) = x^a;  I_x(1, b) = 1 - (1 - x)^b.
  for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    EXPECT_NEAR(incomplete_beta(1, 1, x), x, 1e-14);
    EXPECT_NEAR(incomplete_beta(3.5, 1, x), std::pow(x, 3.5), 1e-14);
    EXPECT_NEAR(incomplete_beta(1, 2.5, x), 1 - std::pow(1 - x, 2.5), 1e-14);
  }
  // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
  EXPECT_NEAR(incomplete_beta(2.3, 5.1, 0.3), 1 - incomplete_beta(5.1, 2.3, 0.7), 1e-14);
  EXPECT_THROW(incomplete_beta(0, 1, 0.5), ParameterError);
  EXPECT_THROW(incomplete_beta(1, 1, 1.5), ParameterError);
}

TEST(PairedTTestTest, EqualInputsGiveZeroTAndUnitP) {
  const std::vector<double> a = {0.003, 0.004, 0.002};
  const auto r = paired_ttest(a, a);
  EXPECT_EQ(r.delta_mse, 0.0);
  EXPECT_EQ(r.t_statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(PairedTTestTest, ConstantNonzeroDifferenceIsDegenerate) {
  const std::vector<double> a = {2, 3, 4};
  const std::vector<double> b = {1, 2, 3};
  const auto r = paired_ttest(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.t_statistic, std::numeric_limits<double>::infinity());
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_EQ(paired_ttest(b, a).t_statistic, -std::numeric_limits<double>::infinity());
}

TEST(PairedTTestTest, SwapAntisymmetryProperty) {
  std::mt19937_64 rng(111);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 50;
    const auto a = testing::random_vector(rng, n, 0.0, 0.01);
    const auto b = testing::random_vector(rng, n, 0.0, 0.01);
    const auto ab = paired_ttest(a, b);
    const auto ba = paired_ttest(b, a);
    EXPECT_EQ(ab.delta_mse, -ba.delta_mse);
    EXPECT_EQ(ab.t_statistic, -ba.t_statistic);
    EXPECT_EQ(ab.p_value, ba.p_value);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
  }
}

TEST(PairedTTestTest, Errors) {
  EXPECT_THROW(paired_ttest(std::vector<double>{1}, std::vector<double>{2}),
               ParameterError);
  EXPECT_THROW(paired_ttest(std::vector<double>{1, 2}, std::vector<double>{2}),
               StructuralError);
}

}  // namespace
}  // namespace blendsem
