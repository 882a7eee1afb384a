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

#include "blendsem/frame.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "blendsem/error.h"
#include "gtest/gtest.h"
#include "support/test_util.h"

namespace blendsem {
namespace {

using testing::random_frame;
using testing::random_raw_frame;

TEST(CoefficientFrameTest, RejectsWrongLength) {
  std::vector<double> v(60, 0.0);
  EXPECT_THROW(CoefficientFrame{std::span<const double>(v)}, StructuralError);
  v.resize(62, 0.0);
  EXPECT_THROW(CoefficientFrame{std::span<const double>(v)}, StructuralError);
}

TEST(CoefficientFrameTest, RejectsNonFiniteNamingChannel) {
  CoefficientArray v{};
  v[ActionRegistry::index_of("JawOpen")] = std::numeric_limits<double>::quiet_NaN();
  try {
    CoefficientFrame f(v);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "JawOpen");
  }
  v.fill(0.0);
  v[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(CoefficientFrame{v}, ValidationError);
  EXPECT_THROW(CoefficientFrame().with("JawOpen", -INFINITY), ValidationError);
}

TEST(CoefficientFrameTest, WithAndAt) {
  const auto f = CoefficientFrame::zeros().with("JawOpen", 0.25);
  EXPECT_DOUBLE_EQ(f.at("JawOpen"), 0.25);
  EXPECT_DOUBLE_EQ(f.at("MouthRight"), 0.0);
  EXPECT_THROW(f.at("Jaw"), ValidationError);
}

TEST(CalibrateTest, HandArithmetic) {
  const auto raw = CoefficientFrame::zeros().with("JawOpen", 0.50).with(
      "EyeBlinkLeft", 0.05);
  const auto neutral = CoefficientFrame::zeros().with("JawOpen", 0.10).with(
      "EyeBlinkLeft", 0.10);
  const auto c = calibrate(raw, neutral);
  EXPECT_NEAR(c.at("JawOpen"), 0.40, 1e-15);
  EXPECT_EQ(c.at("EyeBlinkLeft"), 0.0);
}

TEST(CalibrateTest, HeadChannelsStaySigned) {
  const auto raw = CoefficientFrame::zeros().with("HeadYaw", -0.2).with(
      "HeadPitch", 1.7);
  const auto neutral = CoefficientFrame::zeros().with("HeadYaw", 0.1).with(
      "HeadPitch", -0.5);
  const auto c = calibrate(raw, neutral);
  EXPECT_NEAR(c.at("HeadYaw"), -0.3, 1e-15);
  EXPECT_EQ(c.at("HeadPitch"), 1.0);
}

TEST(CalibrateTest, SelfBaselineIsZeroProperty) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const auto f = random_raw_frame(rng);
    EXPECT_EQ(calibrate(f, f), CoefficientFrame::zeros());
  }
}

TEST(CalibrateTest, ZeroNeutralEqualsClampProperty) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto f = random_raw_frame(rng);
    EXPECT_EQ(calibrate(f, CoefficientFrame::zeros()), clamp(f));
  }
}

TEST(CalibrateTest, OutputAlwaysInRangeProperty) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    const auto c = calibrate(random_raw_frame(rng), random_raw_frame(rng));
    EXPECT_TRUE(c.in_calibrated_range());
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      const auto r = channel_range(i);
      EXPECT_GE(c[i], r.lo);
      EXPECT_LE(c[i], r.hi);
    }
  }
}

TEST(ChannelRangeTest, BlendshapeAndRotationRanges) {
  const auto jaw = channel_range(ActionRegistry::index_of("JawOpen"));
  EXPECT_EQ(jaw.lo, 0.0);
  EXPECT_EQ(jaw.hi, 1.0);
  const auto roll = channel_range(ActionRegistry::index_of("HeadRoll"));
  EXPECT_EQ(roll.lo, -1.0);
  EXPECT_EQ(roll.hi, 1.0);
  EXPECT_FALSE(CoefficientFrame::zeros().with("JawOpen", 1.5).in_calibrated_range());
  EXPECT_TRUE(CoefficientFrame::zeros().with("HeadRoll", -0.3).in_calibrated_range());
}

TEST(Dominant13Test, ZerosAndSelection) {
  for (double v : dominant13(CoefficientFrame::zeros())) EXPECT_EQ(v, 0.0);
  const auto d = dominant13(CoefficientFrame::zeros().with("JawOpen", 0.7));
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(d[i], i == 6 ? 0.7 : 0.0) << i;
  }
}

TEST(Dominant13Test, MatchesNameLookupProperty) {
  const char* names[] = {"EyeBlinkLeft",     "EyeLookDownLeft",  "EyeLookInLeft",
                         "EyeBlinkRight",    "EyeLookDownRight", "EyeLookInRight",
                         "JawOpen",          "MouthSmileLeft",   "MouthSmileRight",
                         "MouthUpperUpLeft", "MouthUpperUpRight", "BrowDownLeft",
                         "BrowDownRight"};
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const auto f = random_frame(rng);
    const auto d = dominant13(f);
    for (std::size_t i = 0; i < 13; ++i) EXPECT_EQ(d[i], f.at(names[i]));
  }
}

TEST(ActionValueSetTest, RoundTripProperty) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 200; ++t) {
    const ActionValueSet s{random_frame(rng)};
    EXPECT_EQ(ActionValueSet::from_map(s.to_map()), s);
  }
}

TEST(ActionValueSetTest, FromMapNamesMissingAndUnknownKeys) {
  auto m = ActionValueSet{}.to_map();
  m.erase("EyeBlinkLeft");
  try {
    ActionValueSet::from_map(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "EyeBlinkLeft");
  }
  m["EyeBlinkLeft"] = 0.0;
  m["EyeBlinkMiddle"] = 0.0;
  try {
    ActionValueSet::from_map(m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "EyeBlinkMiddle");
  }
}

}  // namespace
}  // namespace blendsem
