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

#ifndef BLENDSEM_DESCRIPTION_H_
#define BLENDSEM_DESCRIPTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blendsem/registry.h"

namespace blendsem {

enum class Intensity { kSlight, kModerate, kStrong };

std::string_view ToString(Intensity i);
std::optional<Intensity> IntensityFromString(std::string_view s);

struct MuscleMovement {
  Region region;
  std::string action;  // canonical registry name
  Intensity intensity;

  friend bool operator==(const MuscleMovement&, const MuscleMovement&) = default;
};

// Hierarchical semantic description of one coefficient vector: expression
// type, muscle movements, optional emotion cue and symmetry pattern.
//
// Serialized as the "analysis" object with the keys expression_category,
// muscle_movements, emotional_implication (null when absent) and symmetry.
struct SemanticDescription {
  std::string expression_type;
  std::vector<MuscleMovement> muscle_movements;
  std::optional<std::string> emotion_cue;
  std::string symmetry_pattern;

  // Throws ValidationError when a component is empty, the emotion cue is an
  // empty string, or a movement names an unknown action / wrong region.
  void validate() const;

  friend bool operator==(const SemanticDescription&,
                         const SemanticDescription&) = default;
};

// Compact JSON object, keys in the fixed order above. Byte-deterministic.
std::string description_to_json(const SemanticDescription& d);

}  // namespace blendsem

#endif  // BLENDSEM_DESCRIPTION_H_
