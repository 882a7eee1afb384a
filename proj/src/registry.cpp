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

#include "blendsem/registry.h"

#include <algorithm>
#include <unordered_map>

#include "blendsem/error.h"

namespace blendsem {
namespace {

constexpr std::array<std::string_view, kActionCount> kNames = {
    "MouthRight",        "TongueOut",         "LeftEyeRoll",
    "RightEyeRoll",      "JawRight",          "CheekPuff",
    "MouthLeft",         "MouthFrownRight",   "MouthFrownLeft",
    "EyeLookUpLeft",     "EyeLookUpRight",    "MouthShrugUpper",
    "MouthRollLower",    "EyeLookOutLeft",    "MouthRollUpper",
    "EyeSquintLeft",     "EyeSquintRight",    "MouthPressRight",
    "MouthShrugLower",   "JawLeft",           "MouthPressLeft",
    "EyeLookOutRight",   "EyeLookInLeft",     "MouthDimpleLeft",
    "MouthClose",        "LeftEyeYaw",        "RightEyeYaw",
    "JawForward",        "MouthDimpleRight",  "MouthFunnel",
    "CheekSquintRight",  "CheekSquintLeft",   "MouthUpperUpLeft",
    "BrowDownRight",     "BrowDownLeft",      "EyeLookInRight",
    "MouthUpperUpRight", "MouthStretchLeft",  "JawOpen",
    "HeadRoll",          "MouthStretchRight", "NoseSneerLeft",
    "HeadPitch",         "NoseSneerRight",    "MouthLowerDownRight",
    "HeadYaw",           "MouthLowerDownLeft", "MouthSmileLeft",
    "BrowInnerUp",       "MouthPucker",       "MouthSmileRight",
    "LeftEyePitch",      "RightEyePitch",     "EyeWideRight",
    "EyeWideLeft",       "BrowOuterUpRight",  "BrowOuterUpLeft",
    "EyeBlinkLeft",      "EyeBlinkRight",     "EyeLookDownLeft",
    "EyeLookDownRight",
};

constexpr std::array<std::string_view, kHeadMotionCount> kHeadMotionNames = {
    "HeadYaw",      "HeadPitch",     "HeadRoll",
    "LeftEyeYaw",   "LeftEyePitch",  "LeftEyeRoll",
    "RightEyeYaw",  "RightEyePitch", "RightEyeRoll",
};

constexpr std::array<std::string_view, kDominantCount> kDominantNames = {
    "EyeBlinkLeft",     "EyeLookDownLeft",   "EyeLookInLeft",
    "EyeBlinkRight",    "EyeLookDownRight",  "EyeLookInRight",
    "JawOpen",          "MouthSmileLeft",    "MouthSmileRight",
    "MouthUpperUpLeft", "MouthUpperUpRight", "BrowDownLeft",
    "BrowDownRight",
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

const std::unordered_map<std::string_view, ActionIndex>& name_index() {
  static const auto* map = [] {
    auto* m = new std::unordered_map<std::string_view, ActionIndex>();
    for (ActionIndex i = 0; i < kNames.size(); ++i) m->emplace(kNames[i], i);
    return m;
  }();
  return *map;
}

template <std::size_t N>
std::array<ActionIndex, N> lookup_all(
    const std::array<std::string_view, N>& names) {
  std::array<ActionIndex, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = name_index().at(names[i]);
  return out;
}

struct Tables {
  std::array<bool, kActionCount> head{};
  std::array<Region, kActionCount> region{};
  std::array<ActionIndex, kDominantCount> dominant{};
  std::array<ActionIndex, 3> head_pose{};
};

const Tables& tables() {
  static const Tables t = [] {
    Tables t;
    for (auto name : kHeadMotionNames) t.head[name_index().at(name)] = true;
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      const auto n = kNames[i];
      if (t.head[i]) {
        t.region[i] = Region::kHead;
      } else if (starts_with(n, "Brow")) {
        t.region[i] = Region::kEyebrows;
      } else if (starts_with(n, "Eye")) {
        t.region[i] = Region::kEyes;
      } else if (starts_with(n, "Cheek") || starts_with(n, "NoseSneer")) {
        t.region[i] = Region::kCheeks;
      } else if (starts_with(n, "Jaw")) {
        t.region[i] = Region::kJaw;
      } else {
        t.region[i] = Region::kMouth;  // Mouth* and TongueOut
      }
    }
    t.dominant = lookup_all(kDominantNames);
    t.head_pose = lookup_all(std::array<std::string_view, 3>{
        "HeadYaw", "HeadPitch", "HeadRoll"});
    return t;
  }();
  return t;
}

}  // namespace

std::string_view ToString(Region region) {
  switch (region) {
    case Region::kEyebrows:
      return "eyebrows";
    case Region::kEyes:
      return "eyes";
    case Region::kCheeks:
      return "cheeks";
    case Region::kMouth:
      return "mouth";
    case Region::kJaw:
      return "jaw";
    case Region::kHead:
      return "head";
  }
  return "";
}

std::optional<Region> RegionFromString(std::string_view s) {
  for (Region r : {Region::kEyebrows, Region::kEyes, Region::kCheeks,
                   Region::kMouth, Region::kJaw, Region::kHead}) {
    if (ToString(r) == s) return r;
  }
  return std::nullopt;
}

std::span<const std::string_view, kActionCount> ActionRegistry::names() {
  return kNames;
}

std::string_view ActionRegistry::name(ActionIndex index) {
  return kNames.at(index);
}

std::optional<ActionIndex> ActionRegistry::find(std::string_view name) {
  const auto& m = name_index();
  auto it = m.find(name);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

ActionIndex ActionRegistry::index_of(std::string_view name) {
  auto idx = find(name);
  if (!idx) {
    throw ValidationError("unknown action name '" + std::string(name) + "'",
                          std::string(name));
  }
  return *idx;
}

bool ActionRegistry::is_head_motion(ActionIndex index) {
  return tables().head.at(index);
}

Region ActionRegistry::region(ActionIndex index) {
  return tables().region.at(index);
}

std::span<const ActionIndex, kDominantCount> ActionRegistry::dominant13() {
  return tables().dominant;
}

std::span<const ActionIndex, 3> ActionRegistry::head_pose() {
  return tables().head_pose;
}

const std::vector<SymmetryPair>& symmetry_pairs() {
  static const std::vector<SymmetryPair> pairs = [] {
    std::vector<SymmetryPair> out;
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      const auto n = kNames[i];
      if (!ends_with(n, "Left")) continue;
      std::string stem(n.substr(0, n.size() - 4));
      auto right = ActionRegistry::find(stem + "Right");
      if (right) out.push_back({i, *right, stem});
    }
    return out;
  }();
  return pairs;
}

}  // namespace blendsem
