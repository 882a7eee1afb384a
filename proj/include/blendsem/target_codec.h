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

#ifndef BLENDSEM_TARGET_CODEC_H_
#define BLENDSEM_TARGET_CODEC_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "blendsem/description.h"
#include "blendsem/frame.h"

namespace blendsem {

// Version of the two-key wire schema shipped in schema/target.schema.json.
inline constexpr std::string_view kTargetSchemaVersion = "1.0.0";

// Joint target U = [analysis || arkit] in canonical form:
//   {"analysis":{...},"arkit":{"MouthRight":0.000,...}}
// compact, "analysis" first, arkit keys in registry order, every value
// rendered with three decimals (half away from zero).
struct TargetSequence {
  SemanticDescription analysis;
  ActionValueSet arkit;
  std::string raw_text;
};

// Throws ValidationError when the description is invalid or a value lies
// outside its channel range.
TargetSequence encode_target(const SemanticDescription& description,
                             const ActionValueSet& set);

// A change lenient parsing made to the predictor's output.
struct Repair {
  enum class Kind {
    kFilledMissing,   // absent coefficient set to 0.0
    kClamped,         // out-of-range coefficient clamped
    kDroppedUnknown,  // unknown key removed
    kCoerced,         // non-numeric / malformed value replaced
    kDefaulted,       // missing or malformed analysis field defaulted
  };
  Kind kind;
  std::string key;
  std::string detail;

  friend bool operator==(const Repair&, const Repair&) = default;
};

std::string_view ToString(Repair::Kind k);

enum class ParseMode { kStrict, kLenient };

struct ParsedPrediction {
  SemanticDescription analysis;
  ActionValueSet arkit;
  std::vector<Repair> repairs;
};

// Strict: the whole text is one JSON object with exactly "analysis" and
// "arkit"; arkit holds the 61 canonical keys, numeric, in range, on the
// three-decimal grid. Violations raise ValidationError naming the key.
//
// Lenient: the first well-formed JSON object inside the text is used. Missing
// coefficients become 0.0, out-of-range ones are clamped, unknown keys are
// dropped and a malformed analysis is defaulted; each change is recorded.
//
// Text with no parseable object raises ParseError in both modes.
ParsedPrediction parse_prediction(std::string_view text, ParseMode mode);

struct CoefficientViolation {
  std::string key;
  double value = 0.0;
  std::string rule;  // "range", "missing", "unknown", "non-finite"
};

// Empty iff every registry key is present, finite and within its channel
// range (blendshapes [0,1], head/eye rotations [-1,1]) and no key is unknown.
std::vector<CoefficientViolation> validate_coefficients(
    const std::map<std::string, double>& entries);
std::vector<CoefficientViolation> validate_coefficients(const ActionValueSet& s);

// The three-decimal rendering used for arkit values and prompts.
std::string format_coefficient(double value);

// {"MouthRight":0.000,...} in registry order.
std::string coefficients_to_json(const ActionValueSet& s);

}  // namespace blendsem

#endif  // BLENDSEM_TARGET_CODEC_H_
