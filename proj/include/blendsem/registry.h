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

#ifndef BLENDSEM_REGISTRY_H_
#define BLENDSEM_REGISTRY_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blendsem {

// The ARKit action registry: 52 blendshapes and 9 head/eye rotations.
//
// The order is fixed and shared by every serialization (CSV headers, JSON
// targets, prompts, checkpoints). It follows the per-coefficient evaluation
// table order so that vectors written by different tools line up.
inline constexpr std::size_t kActionCount = 61;
inline constexpr std::size_t kBlendshapeCount = 52;
inline constexpr std::size_t kHeadMotionCount = 9;
inline constexpr std::size_t kDominantCount = 13;

using ActionIndex = std::size_t;

// Facial region an action belongs to. Head rotations have no region.
enum class Region { kEyebrows, kEyes, kCheeks, kMouth, kJaw, kHead };

std::string_view ToString(Region region);
std::optional<Region> RegionFromString(std::string_view s);

class ActionRegistry {
 public:
  static std::span<const std::string_view, kActionCount> names();
  static std::string_view name(ActionIndex index);

  // Returns nullopt for names outside the registry. Matching is exact.
  static std::optional<ActionIndex> find(std::string_view name);
  // Throws ValidationError naming the key when it is unknown.
  static ActionIndex index_of(std::string_view name);

  // Signed rotation channel (HeadYaw ... RightEyeRoll).
  static bool is_head_motion(ActionIndex index);
  static bool is_blendshape(ActionIndex index) {
    return !is_head_motion(index);
  }

  static Region region(ActionIndex index);

  // EyeBlinkLeft, ..., BrowDownRight in the cross-comparison order.
  static std::span<const ActionIndex, kDominantCount> dominant13();

  // HeadYaw, HeadPitch, HeadRoll.
  static std::span<const ActionIndex, 3> head_pose();
};

struct SymmetryPair {
  ActionIndex left;
  ActionIndex right;
  // Shared name stem, e.g. "EyeBlink" for EyeBlinkLeft/EyeBlinkRight.
  std::string stem;
};

// Every action whose name ends in "Left" paired with its "Right" twin,
// ordered by the registry position of the left member.
const std::vector<SymmetryPair>& symmetry_pairs();

}  // namespace blendsem

#endif  // BLENDSEM_REGISTRY_H_
