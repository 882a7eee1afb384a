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

#include "blendsem/description.h"

#include <array>

#include "blendsem/error.h"
#include "description_json.h"

namespace blendsem {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 4> kAnalysisKeys = {
    "expression_category", "muscle_movements", "emotional_implication",
    "symmetry"};

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

}  // namespace

std::string_view ToString(Intensity i) {
  switch (i) {
    case Intensity::kSlight:
      return "slight";
    case Intensity::kModerate:
      return "moderate";
    case Intensity::kStrong:
      return "strong";
  }
  return "";
}

std::optional<Intensity> IntensityFromString(std::string_view s) {
  if (s == "slight") return Intensity::kSlight;
  if (s == "moderate") return Intensity::kModerate;
  if (s == "strong") return Intensity::kStrong;
  return std::nullopt;
}

void SemanticDescription::validate() const {
  if (expression_type.empty()) {
    throw ValidationError("expression_category is empty", "expression_category");
  }
  if (symmetry_pattern.empty()) {
    throw ValidationError("symmetry is empty", "symmetry");
  }
  if (emotion_cue && emotion_cue->empty()) {
    throw ValidationError("emotional_implication must be absent, not empty",
                          "emotional_implication");
  }
  for (const auto& m : muscle_movements) {
    auto idx = ActionRegistry::find(m.action);
    if (!idx) {
      throw ValidationError("muscle movement names unknown action '" +
                                m.action + "'",
                            m.action);
    }
    if (ActionRegistry::region(*idx) != m.region || m.region == Region::kHead) {
      throw ValidationError("action " + m.action + " is not in region " +
                                std::string(ToString(m.region)),
                            m.action);
    }
  }
}

std::string description_to_json(const SemanticDescription& d) {
  std::string out = "{\"expression_category\":" + quote(d.expression_type) +
                    ",\"muscle_movements\":[";
  for (std::size_t i = 0; i < d.muscle_movements.size(); ++i) {
    const auto& m = d.muscle_movements[i];
    if (i) out.push_back(',');
    out += "{\"region\":" + quote(ToString(m.region)) +
           ",\"action\":" + quote(m.action) +
           ",\"intensity\":" + quote(ToString(m.intensity)) + "}";
  }
  out += "],\"emotional_implication\":";
  out += d.emotion_cue ? quote(*d.emotion_cue) : std::string("null");
  out += ",\"symmetry\":" + quote(d.symmetry_pattern) + "}";
  return out;
}

namespace internal {
namespace {

void fail_or_repair(std::vector<Repair>* repairs, const std::string& key,
                    const std::string& msg) {
  if (!repairs) throw ValidationError("analysis: " + msg, key);
  repairs->push_back({Repair::Kind::kDefaulted, key, msg});
}

std::string read_text_field(const json& j, const char* key,
                            std::vector<Repair>* repairs) {
  if (j.contains(key) && j.at(key).is_string() &&
      !j.at(key).get<std::string>().empty()) {
    return j.at(key).get<std::string>();
  }
  fail_or_repair(repairs, key,
                 std::string(key) + " missing, empty or not a string");
  return "unknown";
}

}  // namespace

SemanticDescription description_from_json(const json& j,
                                          std::vector<Repair>* repairs) {
  SemanticDescription d;
  if (!j.is_object()) {
    fail_or_repair(repairs, "analysis", "analysis is not an object");
    d.expression_type = "unknown";
    d.symmetry_pattern = "unknown";
    return d;
  }

  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto k : kAnalysisKeys) known = known || k == key;
    if (!known) {
      if (!repairs) throw ValidationError("analysis: unknown key '" + key + "'", key);
      repairs->push_back({Repair::Kind::kDroppedUnknown, key,
                          "unknown analysis key dropped"});
    }
  }

  d.expression_type = read_text_field(j, "expression_category", repairs);
  d.symmetry_pattern = read_text_field(j, "symmetry", repairs);

  if (!j.contains("emotional_implication")) {
    fail_or_repair(repairs, "emotional_implication",
                   "emotional_implication missing");
  } else if (const auto& e = j.at("emotional_implication"); e.is_null()) {
    // explicitly absent
  } else if (e.is_string() && !e.get<std::string>().empty()) {
    d.emotion_cue = e.get<std::string>();
  } else {
    fail_or_repair(repairs, "emotional_implication",
                   "emotional_implication must be null or a non-empty string");
  }

  if (!j.contains("muscle_movements") || !j.at("muscle_movements").is_array()) {
    fail_or_repair(repairs, "muscle_movements",
                   "muscle_movements missing or not an array");
    return d;
  }
  for (const auto& m : j.at("muscle_movements")) {
    const bool well_formed = m.is_object() && m.size() == 3 &&
                             m.contains("region") && m["region"].is_string() &&
                             m.contains("action") && m["action"].is_string() &&
                             m.contains("intensity") &&
                             m["intensity"].is_string();
    if (!well_formed) {
      fail_or_repair(repairs, "muscle_movements", "malformed movement entry");
      continue;
    }
    const auto action = m["action"].get<std::string>();
    const auto idx = ActionRegistry::find(action);
    const auto region = RegionFromString(m["region"].get<std::string>());
    const auto intensity = IntensityFromString(m["intensity"].get<std::string>());
    if (!idx || !region || !intensity || *region == Region::kHead ||
        ActionRegistry::region(*idx) != *region) {
      if (!repairs) {
        throw ValidationError("analysis: invalid movement for '" + action + "'",
                              action);
      }
      repairs->push_back({Repair::Kind::kDroppedUnknown, action,
                          "invalid muscle movement dropped"});
      continue;
    }
    d.muscle_movements.push_back({*region, action, *intensity});
  }
  return d;
}

std::optional<ObjectSpan> find_first_object(std::string_view text,
                                            std::size_t from) {
  for (std::size_t start = text.find('{', from); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          end = i + 1;
          break;
        }
      }
    }
    if (end == std::string_view::npos) continue;
    json value = json::parse(text.substr(start, end - start), nullptr,
                             /*allow_exceptions=*/false);
    if (!value.is_discarded() && value.is_object()) {
      return ObjectSpan{start, end, std::move(value)};
    }
  }
  return std::nullopt;
}

}  // namespace internal
}  // namespace blendsem
