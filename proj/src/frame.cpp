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

#include <algorithm>
#include <cmath>

#include "blendsem/error.h"

namespace blendsem {
namespace {

void check_finite(ActionIndex i, double v) {
  if (!std::isfinite(v)) {
    std::string name(ActionRegistry::name(i));
    throw ValidationError("non-finite value for " + name, name);
  }
}

}  // namespace

CoefficientFrame::CoefficientFrame(const CoefficientArray& values,
                                   std::optional<double> timestamp)
    : values_(values), timestamp_(timestamp) {
  for (ActionIndex i = 0; i < kActionCount; ++i) check_finite(i, values_[i]);
  if (timestamp_ && !std::isfinite(*timestamp_)) {
    throw ValidationError("non-finite frame timestamp", "timestamp");
  }
}

CoefficientFrame::CoefficientFrame(std::span<const double> values,
                                   std::optional<double> timestamp)
    : timestamp_(timestamp) {
  if (values.size() != kActionCount) {
    throw StructuralError("coefficient frame needs " +
                          std::to_string(kActionCount) + " values, got " +
                          std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), values_.begin());
  for (ActionIndex i = 0; i < kActionCount; ++i) check_finite(i, values_[i]);
  if (timestamp_ && !std::isfinite(*timestamp_)) {
    throw ValidationError("non-finite frame timestamp", "timestamp");
  }
}

double CoefficientFrame::at(std::string_view action) const {
  return values_[ActionRegistry::index_of(action)];
}

CoefficientFrame CoefficientFrame::with(ActionIndex i, double value) const {
  CoefficientArray v = values_;
  v.at(i) = value;
  return CoefficientFrame(v, timestamp_);
}

CoefficientFrame CoefficientFrame::with(std::string_view action,
                                        double value) const {
  return with(ActionRegistry::index_of(action), value);
}

bool CoefficientFrame::in_calibrated_range() const {
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    const auto r = channel_range(i);
    if (values_[i] < r.lo || values_[i] > r.hi) return false;
  }
  return true;
}

ChannelRange channel_range(ActionIndex i) {
  return ActionRegistry::is_head_motion(i) ? ChannelRange{-1.0, 1.0}
                                           : ChannelRange{0.0, 1.0};
}

double clamp_channel(ActionIndex i, double value) {
  const auto r = channel_range(i);
  return std::clamp(value, r.lo, r.hi);
}

CoefficientFrame clamp(const CoefficientFrame& frame) {
  CoefficientArray v = frame.values();
  for (ActionIndex i = 0; i < kActionCount; ++i) v[i] = clamp_channel(i, v[i]);
  return CoefficientFrame(v, frame.timestamp());
}

CoefficientFrame calibrate(const CoefficientFrame& raw,
                           const CoefficientFrame& neutral) {
  CoefficientArray v{};
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    v[i] = clamp_channel(i, raw[i] - neutral[i]);
  }
  return CoefficientFrame(v, raw.timestamp());
}

std::array<double, kDominantCount> dominant13(const CoefficientFrame& frame) {
  std::array<double, kDominantCount> out{};
  const auto idx = ActionRegistry::dominant13();
  for (std::size_t k = 0; k < kDominantCount; ++k) out[k] = frame[idx[k]];
  return out;
}

ActionValueSet ActionValueSet::from_map(
    const std::map<std::string, double>& entries) {
  CoefficientArray v{};
  std::array<bool, kActionCount> seen{};
  for (const auto& [name, value] : entries) {
    const ActionIndex i = ActionRegistry::index_of(name);
    v[i] = value;
    seen[i] = true;
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!seen[i]) {
      std::string name(ActionRegistry::name(i));
      throw ValidationError("missing action " + name, name);
    }
  }
  return ActionValueSet(CoefficientFrame(v));
}

std::map<std::string, double> ActionValueSet::to_map() const {
  std::map<std::string, double> out;
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    out.emplace(std::string(ActionRegistry::name(i)), frame_[i]);
  }
  return out;
}

}  // namespace blendsem
