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

#include "blendsem/trainer.h"

#include <algorithm>
#include <cmath>

#include "blendsem/adamw.h"
#include "blendsem/error.h"
#include "gtest/gtest.h"
#include "support/synthetic.h"

namespace blendsem {
namespace {

using testing::SeparableGenerator;

TrainConfig small_config() {
  TrainConfig c;
  c.hidden_dim = 32;
  c.output_dim = 16;
  c.learning_rate = 1e-3;
  c.max_epochs = 40;
  c.patience = 5;
  return c;
}

struct SmallData {
  PairedFeatures train;
  PairedFeatures val;
};

constexpr int kMotionDim = 32;
constexpr int kImageDim = 40;
constexpr int kTrainSize = 96;
constexpr int kValSize = 40;

SmallData small_data(int classes = 32) {
  SeparableGenerator gen(7, kMotionDim, kImageDim, classes, 0.05);
  SmallData d;
  d.train = gen.draw(kTrainSize);
  d.val = gen.draw(kValSize);
  return d;
}

TEST(TrainerTest, DeterministicUnderFixedSeed) {
  const auto d = small_data();
  auto cfg = small_config();
  cfg.epoch_limit = 6;
  const auto a = train(d.train, d.val, cfg);
  const auto b = train(d.train, d.val, cfg);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].train_loss, b.curve[i].train_loss);
    EXPECT_EQ(a.curve[i].val_r_precision1, b.curve[i].val_r_precision1);
  }
  EXPECT_EQ(a.image_encoder.params().w1, b.image_encoder.params().w1);
  EXPECT_EQ(a.motion_encoder.params().b2, b.motion_encoder.params().b2);
  cfg.seed = 43;
  const auto c = train(d.train, d.val, cfg);
  EXPECT_NE(c.curve[0].train_loss, a.curve[0].train_loss);
}

TEST(TrainerTest, LearnsSeparableData) {
  const auto d = small_data();
  auto cfg = small_config();
  cfg.patience = 40;
  const auto r = train(d.train, d.val, cfg);
  EXPECT_GE(r.best_val_r_precision1, 0.9);
  EXPECT_LT(r.curve.back().train_loss, r.curve.front().train_loss);
}

TEST(TrainerTest, ReturnsBestEpochEncoders) {
  const auto d = small_data();
  auto cfg = small_config();
  const auto r = train(d.train, d.val, cfg);
  double best = -1.0;
  int best_epoch = -1;
  for (const auto& rec : r.curve) {
    if (rec.val_r_precision1 > best) {
      best = rec.val_r_precision1;
      best_epoch = rec.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_EQ(r.best_val_r_precision1, best);
  EXPECT_EQ(validation_r_precision1(r.image_encoder, r.motion_encoder, d.val,
                                    cfg.batch_size, cfg.seed),
            best);
}

TEST(TrainerTest, EarlyStopsAfterPatienceWithoutImprovement) {
  // Broken pairings give nothing to learn, so validation stalls quickly.
  auto d = small_data();
  d.train = testing::shuffle_motion(d.train, 1);
  d.val = testing::shuffle_motion(d.val, 2);
  auto cfg = small_config();
  cfg.patience = 3;
  cfg.max_epochs = 200;
  const auto r = train(d.train, d.val, cfg);
  ASSERT_LT(r.curve.size(), 200u);
  EXPECT_EQ(static_cast<int>(r.curve.size()), r.best_epoch + cfg.patience + 1);
}

TEST(TrainerTest, LearningRateFollowsCosineSchedule) {
  const auto d = small_data();
  auto cfg = small_config();
  cfg.epoch_limit = 5;
  cfg.patience = 100;
  const auto r = train(d.train, d.val, cfg);
  ASSERT_EQ(r.curve.size(), 5u);
  for (const auto& rec : r.curve) {
    EXPECT_EQ(rec.learning_rate, cosine_lr(cfg.learning_rate, rec.epoch, cfg.max_epochs));
  }
}

TEST(TrainerTest, ValidationBatchShrinksToSplitSize) {
  const auto d = small_data();
  std::mt19937_64 rng(1);
  const auto img = Encoder::initialize({kImageDim, 8, 4}, rng);
  const auto mot = Encoder::initialize({kMotionDim, 8, 4}, rng);
  PairedFeatures tiny{d.val.image.topRows(5), d.val.motion.topRows(5)};
  const double r = validation_r_precision1(img, mot, tiny, 32, 42);
  EXPECT_GE(r, 0.0);
  EXPECT_LE(r, 1.0);
}

TEST(TrainerTest, FitEvaluatorStandardizesMotion) {
  auto d = small_data();
  d.train.motion = d.train.motion * 50.0 + Eigen::MatrixXd::Constant(kTrainSize, kMotionDim, 7.0);
  d.val.motion = d.val.motion * 50.0 + Eigen::MatrixXd::Constant(kValSize, kMotionDim, 7.0);
  auto cfg = small_config();
  cfg.epoch_limit = 2;
  const auto fit = fit_evaluator(d.train, d.val, cfg);
  const auto& st = fit.evaluator.motion_stats;
  for (Eigen::Index c = 0; c < kMotionDim; ++c) {
    const double mean = d.train.motion.col(c).mean();
    const double var =
        (d.train.motion.col(c).array() - mean).square().sum() / kTrainSize;
    EXPECT_NEAR(st.mean(c), mean, 1e-9);
    EXPECT_NEAR(st.std(c), std::sqrt(var), 1e-9);
  }
  const Eigen::MatrixXd e = fit.evaluator.embed_motion(d.val.motion);
  EXPECT_EQ(e.rows(), kValSize);
  EXPECT_NEAR(e.row(0).norm(), 1.0, 1e-12);
}

TEST(TrainerTest, ConfigValidation) {
  const auto d = small_data();
  auto bad = [&](auto mutate) {
    auto c = small_config();
    mutate(c);
    EXPECT_THROW(train(d.train, d.val, c), ParameterError);
  };
  bad([](TrainConfig& c) { c.temperature = 0; });
  bad([](TrainConfig& c) { c.learning_rate = -1; });
  bad([](TrainConfig& c) { c.batch_size = 1; });
  bad([](TrainConfig& c) { c.patience = 0; });
  bad([](TrainConfig& c) { c.max_epochs = 0; });
  bad([](TrainConfig& c) { c.epoch_limit = -1; });
}

TEST(TrainerTest, InputErrors) {
  const auto d = small_data();
  const auto cfg = small_config();
  PairedFeatures ragged{d.train.image, d.train.motion.topRows(10)};
  EXPECT_THROW(train(ragged, d.val, cfg), StructuralError);
  PairedFeatures nan = d.train;
  nan.motion(3, 3) = NAN;
  EXPECT_THROW(train(nan, d.val, cfg), ValidationError);
  PairedFeatures wide{d.val.image, Eigen::MatrixXd::Zero(kValSize, kMotionDim + 1)};
  EXPECT_THROW(train(d.train, wide, cfg), StructuralError);
  PairedFeatures one{d.train.image.topRows(1), d.train.motion.topRows(1)};
  EXPECT_THROW(train(one, d.val, cfg), ParameterError);
}

}  // namespace
}  // namespace blendsem
