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

#include "blendsem/target_codec.h"

#include <cmath>
#include <set>

#include "blendsem/error.h"
#include "blendsem/numeric_format.h"
#include "description_json.h"

namespace blendsem {
namespace {

using nlohmann::json;

constexpr int kDecimals = 3;

bool on_grid(double v) {
  const double scaled = v * 1000.0;
  return std::fabs(scaled - std::round(scaled)) < 1e-6;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Parses the whole text as JSON and reports keys repeated inside one object.
json parse_whole(std::string_view text, std::vector<std::string>* duplicates) {
  std::vector<std::set<std::string>> scopes;
  json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event,
                                   json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        scopes.emplace_back();
        break;
      case json::parse_event_t::object_end:
        if (!scopes.empty()) scopes.pop_back();
        break;
      case json::parse_event_t::key:
        if (!scopes.empty() && !scopes.back().insert(parsed.get<std::string>()).second) {
          duplicates->push_back(parsed.get<std::string>());
        }
        break;
      default:
        break;
    }
    return true;
  };
  return json::parse(text, cb, /*allow_exceptions=*/false);
}

ParsedPrediction parse_strict(std::string_view text) {
  std::vector<std::string> duplicates;
  const json root = parse_whole(trim(text), &duplicates);
  if (root.is_discarded()) {
    if (internal::find_first_object(text)) {
      throw ValidationError("text contains content outside the JSON object");
    }
    throw ParseError("no parseable JSON object in predictor output");
  }
  if (!root.is_object()) throw ValidationError("top level is not a JSON object");
  if (!duplicates.empty()) {
    throw ValidationError("duplicate key '" + duplicates.front() + "'",
                          duplicates.front());
  }
  for (const char* key : {"analysis", "arkit"}) {
    if (!root.contains(key)) {
      throw ValidationError(std::string("missing top-level key '") + key + "'",
                            key);
    }
  }
  for (const auto& [key, _] : root.items()) {
    if (key != "analysis" && key != "arkit") {
      throw ValidationError("unexpected top-level key '" + key + "'", key);
    }
  }

  const json& arkit = root.at("arkit");
  if (!arkit.is_object()) throw ValidationError("arkit is not an object", "arkit");
  CoefficientArray values{};
  std::array<bool, kActionCount> seen{};
  for (const auto& [key, value] : arkit.items()) {
    const auto idx = ActionRegistry::find(key);
    if (!idx) throw ValidationError("unknown arkit key '" + key + "'", key);
    if (!value.is_number()) {
      throw ValidationError("non-numeric value for " + key, key);
    }
    const double v = value.get<double>();
    const auto range = channel_range(*idx);
    if (!std::isfinite(v) || v < range.lo || v > range.hi) {
      throw ValidationError("value for " + key + " out of range", key);
    }
    if (!on_grid(v)) {
      throw ValidationError("value for " + key + " is not on the 0.001 grid", key);
    }
    values[*idx] = v;
    seen[*idx] = true;
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!seen[i]) {
      std::string name(ActionRegistry::name(i));
      throw ValidationError("missing arkit key '" + name + "'", name);
    }
  }
  if (arkit.size() != kActionCount) {
    throw ValidationError("arkit must hold exactly 61 keys", "arkit");
  }

  ParsedPrediction out{internal::description_from_json(root.at("analysis"), nullptr),
                       ActionValueSet(CoefficientFrame(values)),
                       {}};
  out.analysis.validate();
  return out;
}

ParsedPrediction parse_lenient(std::string_view text) {
  auto found = internal::find_first_object(text);
  if (!found) throw ParseError("no parseable JSON object in predictor output");
  const json& root = found->value;

  std::vector<Repair> repairs;
  json arkit = json::object();
  bool two_key = false;
  if (root.contains("arkit") && root.at("arkit").is_object()) {
    arkit = root.at("arkit");
    two_key = true;
  } else {
    bool flat = false;
    for (const auto& [key, _] : root.items()) {
      flat = flat || ActionRegistry::find(key).has_value();
    }
    if (flat) {
      arkit = root;
    } else {
      repairs.push_back({Repair::Kind::kDefaulted, "arkit",
                         "arkit object missing"});
    }
  }

  SemanticDescription analysis;
  if (root.contains("analysis")) {
    analysis = internal::description_from_json(root.at("analysis"), &repairs);
  } else {
    repairs.push_back({Repair::Kind::kDefaulted, "analysis",
                       "analysis missing"});
    analysis.expression_type = "unknown";
    analysis.symmetry_pattern = "unknown";
  }
  // In the flat layout the coefficient loop below reports stray keys.
  const bool flat = !two_key && !arkit.empty();
  if (!flat) {
    for (const auto& [key, _] : root.items()) {
      if (key != "analysis" && !(two_key && key == "arkit")) {
        repairs.push_back({Repair::Kind::kDroppedUnknown, key,
                           "unexpected top-level key dropped"});
      }
    }
  }

  CoefficientArray values{};
  std::array<bool, kActionCount> seen{};
  for (const auto& [key, value] : arkit.items()) {
    const auto idx = ActionRegistry::find(key);
    if (!idx) {
      if (key != "analysis") {
        repairs.push_back({Repair::Kind::kDroppedUnknown, key,
                           "unknown coefficient dropped"});
      }
      continue;
    }
    double v = 0.0;
    std::optional<double> parsed;
    if (value.is_number()) {
      parsed = value.get<double>();
    } else if (value.is_string()) {
      parsed = parse_double(trim(value.get<std::string>()));
    }
    if (parsed && std::isfinite(*parsed)) {
      v = *parsed;
      if (!value.is_number()) {
        repairs.push_back({Repair::Kind::kCoerced, key,
                           "numeric string converted"});
      }
    } else {
      repairs.push_back({Repair::Kind::kCoerced, key,
                         "non-numeric value replaced by 0"});
    }
    const double clamped = clamp_channel(*idx, v);
    if (clamped != v) {
      repairs.push_back({Repair::Kind::kClamped, key,
                         format_shortest(v) + " clamped to " +
                             format_shortest(clamped)});
    }
    values[*idx] = clamped;
    seen[*idx] = true;
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!seen[i]) {
      repairs.push_back({Repair::Kind::kFilledMissing,
                         std::string(ActionRegistry::name(i)),
                         "missing coefficient filled with 0"});
    }
  }
  return {std::move(analysis), ActionValueSet(CoefficientFrame(values)),
          std::move(repairs)};
}

}  // namespace

std::string_view ToString(Repair::Kind k) {
  switch (k) {
    case Repair::Kind::kFilledMissing:
      return "filled_missing";
    case Repair::Kind::kClamped:
      return "clamped";
    case Repair::Kind::kDroppedUnknown:
      return "dropped_unknown";
    case Repair::Kind::kCoerced:
      return "coerced";
    case Repair::Kind::kDefaulted:
      return "defaulted";
  }
  return "";
}

std::string format_coefficient(double value) {
  return format_fixed(value, kDecimals);
}

std::string coefficients_to_json(const ActionValueSet& s) {
  std::string out = "{";
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (i) out.push_back(',');
    out.push_back('"');
    out += ActionRegistry::name(i);
    out += "\":";
    out += format_coefficient(s[i]);
  }
  out.push_back('}');
  return out;
}

TargetSequence encode_target(const SemanticDescription& description,
                             const ActionValueSet& set) {
  description.validate();
  if (const auto v = validate_coefficients(set); !v.empty()) {
    throw ValidationError("cannot encode " + v.front().key + " = " +
                              format_shortest(v.front().value) + " (" +
                              v.front().rule + ")",
                          v.front().key);
  }
  std::string text = "{\"analysis\":" + description_to_json(description) +
                     ",\"arkit\":" + coefficients_to_json(set) + "}";
  return {description, set, std::move(text)};
}

ParsedPrediction parse_prediction(std::string_view text, ParseMode mode) {
  return mode == ParseMode::kStrict ? parse_strict(text) : parse_lenient(text);
}

std::vector<CoefficientViolation> validate_coefficients(
    const std::map<std::string, double>& entries) {
  std::vector<CoefficientViolation> out;
  std::array<bool, kActionCount> seen{};
  for (const auto& [key, value] : entries) {
    const auto idx = ActionRegistry::find(key);
    if (!idx) {
      out.push_back({key, value, "unknown"});
      continue;
    }
    seen[*idx] = true;
    if (!std::isfinite(value)) {
      out.push_back({key, value, "non-finite"});
      continue;
    }
    const auto r = channel_range(*idx);
    if (value < r.lo || value > r.hi) out.push_back({key, value, "range"});
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!seen[i]) out.push_back({std::string(ActionRegistry::name(i)), 0.0, "missing"});
  }
  return out;
}

std::vector<CoefficientViolation> validate_coefficients(const ActionValueSet& s) {
  return validate_coefficients(s.to_map());
}

}  // namespace blendsem
