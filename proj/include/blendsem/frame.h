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

#ifndef BLENDSEM_FRAME_H_
#define BLENDSEM_FRAME_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "blendsem/registry.h"

namespace blendsem {

using CoefficientArray = std::array<double, kActionCount>;

// One 61-dimensional action-value vector in registry order.
//
// Immutable once built; construction rejects wrong lengths (StructuralError)
// and NaN/Inf (ValidationError naming the channel).
class CoefficientFrame {
 public:
  CoefficientFrame() : values_{} {}
  explicit CoefficientFrame(const CoefficientArray& values,
                            std::optional<double> timestamp = std::nullopt);
  explicit CoefficientFrame(std::span<const double> values,
                            std::optional<double> timestamp = std::nullopt);

  static CoefficientFrame zeros() { return CoefficientFrame(); }

  double operator[](ActionIndex i) const { return values_[i]; }
  double at(std::string_view action) const;
  const CoefficientArray& values() const { return values_; }
  std::optional<double> timestamp() const { return timestamp_; }

  // Copy with one channel replaced. Validates the new value.
  CoefficientFrame with(ActionIndex i, double value) const;
  CoefficientFrame with(std::string_view action, double value) const;

  // True when blendshapes lie in [0, 1] and head/eye rotations in [-1, 1].
  bool in_calibrated_range() const;

  friend bool operator==(const CoefficientFrame&,
                         const CoefficientFrame&) = default;

 private:
  CoefficientArray values_;
  std::optional<double> timestamp_;
};

// Valid range of a channel once calibrated.
struct ChannelRange {
  double lo;
  double hi;
};
ChannelRange channel_range(ActionIndex i);
double clamp_channel(ActionIndex i, double value);

// Clamp every channel into its calibrated range.
CoefficientFrame clamp(const CoefficientFrame& frame);

// Baseline subtraction against a neutral capture, then per-channel clamping.
CoefficientFrame calibrate(const CoefficientFrame& raw,
                           const CoefficientFrame& neutral);

std::array<double, kDominantCount> dominant13(const CoefficientFrame& frame);

// The structured set S = {(a_k, v_k)}: every registry action mapped to a value.
class ActionValueSet {
 public:
  ActionValueSet() = default;
  explicit ActionValueSet(CoefficientFrame frame) : frame_(std::move(frame)) {}

  // Throws ValidationError naming the first unknown or missing key.
  static ActionValueSet from_map(const std::map<std::string, double>& entries);

  double at(std::string_view action) const { return frame_.at(action); }
  double operator[](ActionIndex i) const { return frame_[i]; }
  const CoefficientFrame& frame() const { return frame_; }
  std::map<std::string, double> to_map() const;

  friend bool operator==(const ActionValueSet&,
                         const ActionValueSet&) = default;

 private:
  CoefficientFrame frame_;
};

}  // namespace blendsem

#endif  // BLENDSEM_FRAME_H_
