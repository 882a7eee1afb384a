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

#include "blendsem/teacher.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "blendsem/error.h"
#include "blendsem/target_codec.h"
#include "description_json.h"

namespace blendsem {

const std::string_view kStage1Instruction =
    "You are an expert in facial action coding (FACS).\n"
    "\n"
    "Given ARKit blendshape coefficients, infer:\n"
    "\n"
    "1. The most likely facial expression category.\n"
    "2. The detailed facial muscle movements.\n"
    "3. The emotional implication if clearly observable.\n"
    "4. The symmetry or asymmetry of the expression.\n"
    "\n"
    "Base your reasoning only on facial muscle movement intensity.\n"
    "\n"
    "Input: ARKit coefficient JSON.\n";

const std::string_view kStage1ResponseFormat =
    "Reply with only a JSON object with the keys \"expression_category\" "
    "(string), \"muscle_movements\" (array of objects with \"region\" one of "
    "eyebrows, eyes, cheeks, mouth, jaw; \"action\" an ARKit coefficient name; "
    "\"intensity\" one of slight, moderate, strong), \"emotional_implication\" "
    "(string, or null when no emotion is clearly observable) and \"symmetry\" "
    "(string).";

namespace {

using nlohmann::json;

double value_of(const ActionValueSet& s, std::string_view name) {
  return s.at(name);
}

bool both_at_least(const ActionValueSet& s, std::string_view stem, double t) {
  const std::string base(stem);
  return value_of(s, base + "Left") >= t && value_of(s, base + "Right") >= t;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

}  // namespace

std::string build_stage1_prompt(const ActionValueSet& s) {
  std::string out(kStage1Instruction);
  out.push_back('\n');
  out += coefficients_to_json(s);
  return out;
}

std::optional<Intensity> bucket_intensity(double value) {
  if (value >= kStrongThreshold) return Intensity::kStrong;
  if (value >= kModerateThreshold) return Intensity::kModerate;
  if (value >= kSlightThreshold) return Intensity::kSlight;
  return std::nullopt;
}

std::optional<SymmetryPair> most_asymmetric_pair(const ActionValueSet& s) {
  std::optional<SymmetryPair> best;
  double best_gap = -1.0;
  for (const auto& p : symmetry_pairs()) {
    if (!ActionRegistry::is_blendshape(p.left)) continue;
    const double gap = std::fabs(s[p.left] - s[p.right]);
    if (gap >= kSymmetryTolerance && gap > best_gap) {
      best = p;
      best_gap = gap;
    }
  }
  return best;
}

SemanticDescription rule_based_description(const ActionValueSet& s) {
  SemanticDescription d;

  // Movements grouped by region, registry order within a region.
  std::optional<ActionIndex> strongest;
  for (Region region : {Region::kEyebrows, Region::kEyes, Region::kCheeks,
                        Region::kMouth, Region::kJaw}) {
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      if (!ActionRegistry::is_blendshape(i) ||
          ActionRegistry::region(i) != region) {
        continue;
      }
      const auto tier = bucket_intensity(s[i]);
      if (!tier) continue;
      d.muscle_movements.push_back(
          {region, std::string(ActionRegistry::name(i)), *tier});
    }
  }
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (!ActionRegistry::is_blendshape(i) || s[i] < kSlightThreshold) continue;
    if (!strongest || s[i] > s[*strongest]) strongest = i;
  }

  const bool smiling = both_at_least(s, "MouthSmile", kModerateThreshold);
  const bool displeased =
      both_at_least(s, "BrowDown", kModerateThreshold) &&
      std::max(value_of(s, "MouthFrownLeft"), value_of(s, "MouthFrownRight")) >=
          kSlightThreshold;

  if (!strongest) {
    d.expression_type = "neutral";
  } else if (smiling) {
    d.expression_type = "smiling";
  } else if (value_of(s, "JawOpen") >= kStrongThreshold) {
    d.expression_type = "mouth wide open";
  } else if (both_at_least(s, "EyeBlink", kStrongThreshold)) {
    d.expression_type = "eyes closed";
  } else if (both_at_least(s, "BrowDown", kModerateThreshold)) {
    d.expression_type = "frowning";
  } else if (value_of(s, "BrowInnerUp") >= kModerateThreshold ||
             both_at_least(s, "BrowOuterUp", kModerateThreshold)) {
    d.expression_type = "brows raised";
  } else if (value_of(s, "MouthPucker") >= kModerateThreshold ||
             value_of(s, "MouthFunnel") >= kModerateThreshold) {
    d.expression_type = "lips puckered";
  } else {
    d.expression_type =
        std::string(ToString(*bucket_intensity(s[*strongest]))) + " " +
        std::string(ToString(ActionRegistry::region(*strongest))) + " movement";
  }

  // An emotion is named only when exactly one pattern fires.
  if (smiling != displeased) d.emotion_cue = smiling ? "happy" : "displeased";

  if (auto pair = most_asymmetric_pair(s)) {
    d.symmetry_pattern =
        "asymmetric: " + std::string(ActionRegistry::name(pair->left)) + " " +
        format_coefficient(s[pair->left]) + " vs " +
        std::string(ActionRegistry::name(pair->right)) + " " +
        format_coefficient(s[pair->right]);
  } else {
    d.symmetry_pattern = "symmetric";
  }
  return d;
}

std::string_view ToString(Provenance p) {
  return p == Provenance::kService ? "service" : "rule_based";
}

std::string teacher_cache_key(const ActionValueSet& s,
                              std::string_view prompt_version) {
  std::string material = coefficients_to_json(s);
  material.push_back('\n');
  material += prompt_version;
  return sha256_hex(material);
}

std::string cache_entry_to_json_line(const TeacherCacheEntry& e) {
  return "{\"key\":" + json(e.key).dump() +
         ",\"description\":" + description_to_json(e.description) +
         ",\"provenance\":" + json(std::string(ToString(e.provenance))).dump() +
         ",\"prompt_version\":" + json(e.prompt_version).dump() + "}";
}

TeacherCacheEntry cache_entry_from_json_line(std::string_view line) {
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError("malformed teacher cache line");
  }
  TeacherCacheEntry e;
  try {
    e.key = j.at("key").get<std::string>();
    e.prompt_version = j.at("prompt_version").get<std::string>();
    const auto prov = j.at("provenance").get<std::string>();
    if (prov == "service") {
      e.provenance = Provenance::kService;
    } else if (prov == "rule_based") {
      e.provenance = Provenance::kRuleBased;
    } else {
      throw ValidationError("unknown provenance '" + prov + "'", "provenance");
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed teacher cache line: ") + ex.what());
  }
  e.description = internal::description_from_json(j.at("description"), nullptr);
  e.description.validate();
  return e;
}

TeacherCache::TeacherCache(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto entry = cache_entry_from_json_line(line);
    // Re-serialize so lookups return canonical bytes.
    lines_[entry.key] = cache_entry_to_json_line(entry);
  }
}

std::optional<TeacherCacheEntry> TeacherCache::find(const std::string& key) const {
  std::shared_lock lock(mu_);
  auto it = lines_.find(key);
  if (it == lines_.end()) return std::nullopt;
  return cache_entry_from_json_line(it->second);
}

void TeacherCache::insert(const TeacherCacheEntry& entry) {
  std::unique_lock lock(mu_);
  const auto line = cache_entry_to_json_line(entry);
  auto [it, inserted] = lines_.emplace(entry.key, line);
  if (!inserted) return;
  if (path_) {
    if (path_->has_parent_path()) {
      std::filesystem::create_directories(path_->parent_path());
    }
    std::ofstream out(*path_, std::ios::app);
    if (!out) throw InputError("cannot append to cache " + path_->string());
    out << line << '\n';
  }
}

std::size_t TeacherCache::size() const {
  std::shared_lock lock(mu_);
  return lines_.size();
}

SemanticDescription parse_teacher_reply(std::string_view reply) {
  auto found = internal::find_first_object(reply);
  if (!found) throw ParseError("teacher reply holds no JSON object");
  const json& obj = found->value.contains("analysis") ? found->value.at("analysis")
                                                      : found->value;
  auto d = internal::description_from_json(obj, nullptr);
  d.validate();
  return d;
}

TeacherResult generate_description(const ActionValueSet& s,
                                   CompletionClient& client,
                                   TeacherCache& cache,
                                   const TeacherOptions& options) {
  const auto key = teacher_cache_key(s);
  if (auto hit = cache.find(key)) {
    return {hit->description, hit->provenance, true};
  }

  CompletionRequest request;
  request.model = options.model;
  request.prompt = build_stage1_prompt(s);
  request.decoding = options.decoding;
  request.system = std::string(kStage1ResponseFormat);

  std::string last_error;
  const int attempts = std::max(1, options.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::string reply = client.complete(request);
    try {
      auto d = parse_teacher_reply(reply);
      cache.insert({key, d, Provenance::kService,
                    std::string(kStage1PromptVersion)});
      return {std::move(d), Provenance::kService, false};
    } catch (const ParseError& e) {
      last_error = e.what();
    } catch (const ValidationError& e) {
      last_error = e.what();
    }
  }
  if (!options.fallback_to_rules) {
    throw ParseError("teacher reply unusable after " + std::to_string(attempts) +
                     " attempts: " + last_error);
  }
  auto d = rule_based_description(s);
  cache.insert({key, d, Provenance::kRuleBased, std::string(kStage1PromptVersion)});
  return {std::move(d), Provenance::kRuleBased, false};
}

}  // namespace blendsem
