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

#include "blendsem/adamw.h"

#include <cmath>
#include <numbers>

#include "blendsem/error.h"
#include "gtest/gtest.h"

namespace blendsem {
namespace {

TEST(CosineLrTest, Endpoints) {
  EXPECT_DOUBLE_EQ(cosine_lr(1e-4, 0, 1000), 1e-4);
  EXPECT_NEAR(cosine_lr(1e-4, 500, 1000), 5e-5, 1e-20);
  EXPECT_NEAR(cosine_lr(1e-4, 1000, 1000), 0.0, 1e-20);
  EXPECT_DOUBLE_EQ(cosine_lr(1e-4, -3, 1000), 1e-4);
  EXPECT_NEAR(cosine_lr(1e-4, 2000, 1000), 0.0, 1e-20);
  EXPECT_THROW(cosine_lr(1e-4, 0, 0), ParameterError);
}

TEST(CosineLrTest, MonotoneNonIncreasingProperty) {
  double prev = cosine_lr(1.0, 0, 200);
  for (int e = 1; e <= 200; ++e) {
    const double lr = cosine_lr(1.0, e, 200);
    EXPECT_LE(lr, prev);
    EXPECT_NEAR(lr, 0.5 * (1 + std::cos(std::numbers::pi * e / 200.0)), 1e-15);
    prev = lr;
  }
}

// Scalar AdamW written out step by step.
struct ScalarAdamW {
  double m = 0, v = 0;
  int t = 0;
  double step(double p, double g, double lr, double wd) {
    ++t;
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mh = m / (1 - std::pow(0.9, t));
    const double vh = v / (1 - std::pow(0.999, t));
    return p * (1 - lr * wd) - lr * mh / (std::sqrt(vh) + 1e-8);
  }
};

TEST(AdamWTest, MatchesScalarRecurrence) {
  AdamWConfig cfg;
  cfg.weight_decay = 0.01;
  AdamW opt(cfg);
  const int slot = opt.add(2, 1);
  Eigen::MatrixXd p(2, 1);
  p << 1.0, -2.0;
  ScalarAdamW s0, s1;
  double e0 = 1.0, e1 = -2.0;
  const double grads[][2] = {{0.5, -1.0}, {0.1, 3.0}, {-0.7, 0.0}, {2.0, 0.2}};
  for (const auto& g : grads) {
    Eigen::MatrixXd gm(2, 1);
    gm << g[0], g[1];
    opt.begin_step();
    opt.update(slot, p, gm, 0.05);
    e0 = s0.step(e0, g[0], 0.05, 0.01);
    e1 = s1.step(e1, g[1], 0.05, 0.01);
    EXPECT_NEAR(p(0, 0), e0, 1e-14);
    EXPECT_NEAR(p(1, 0), e1, 1e-14);
  }
  EXPECT_EQ(opt.step(), 4);
}

TEST(AdamWTest, FirstStepMovesByAboutLr) {
  AdamW opt;
  const int slot = opt.add(1, 3);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(1, 3);
  Eigen::MatrixXd g(1, 3);
  g << 3.0, -0.001, 100.0;
  opt.begin_step();
  opt.update(slot, p, g, 1e-3);
  EXPECT_NEAR(p(0, 0), -1e-3, 1e-9);
  EXPECT_NEAR(p(0, 1), 1e-3, 1e-8);
  EXPECT_NEAR(p(0, 2), -1e-3, 1e-9);
}

TEST(AdamWTest, ZeroGradientOnlyDecays) {
  AdamWConfig cfg;
  cfg.weight_decay = 0.1;
  AdamW opt(cfg);
  const int slot = opt.add(1, 1);
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, 1, 2.0);
  opt.begin_step();
  opt.update(slot, p, Eigen::MatrixXd::Zero(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(p(0, 0), 2.0 * (1 - 0.05));
}

TEST(AdamWTest, Errors) {
  AdamW opt;
  const int slot = opt.add(2, 2);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(opt.update(slot, p, p, 0.1), ParameterError);
  opt.begin_step();
  EXPECT_THROW(opt.update(slot, p, Eigen::MatrixXd::Zero(2, 3), 0.1), StructuralError);
}

}  // namespace
}  // namespace blendsem
