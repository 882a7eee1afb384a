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

#ifndef BLENDSEM_TEACHER_H_
#define BLENDSEM_TEACHER_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "blendsem/description.h"
#include "blendsem/frame.h"
#include "blendsem/service.h"

namespace blendsem {

// Instruction block sent ahead of the coefficient JSON.
extern const std::string_view kStage1Instruction;
// Bumped whenever the Stage I prompt text changes; part of every cache key.
inline constexpr std::string_view kStage1PromptVersion = "stage1-v1";
// Output-format request sent as the system message.
extern const std::string_view kStage1ResponseFormat;

// Instruction block, a blank line, then the 61 coefficients as compact JSON
// in registry order with three decimals.
std::string build_stage1_prompt(const ActionValueSet& s);

// Intensity tiers: slight [0.1, 0.3), moderate [0.3, 0.6), strong >= 0.6.
inline constexpr double kSlightThreshold = 0.1;
inline constexpr double kModerateThreshold = 0.3;
inline constexpr double kStrongThreshold = 0.6;
// Bilateral pairs differing by less than this count as symmetric.
inline constexpr double kSymmetryTolerance = 0.1;

std::optional<Intensity> bucket_intensity(double value);

// Deterministic teacher used offline and as the service fallback.
SemanticDescription rule_based_description(const ActionValueSet& s);

// Pair with the largest |left - right| among blendshape pairs, or nullopt when
// every pair differs by less than kSymmetryTolerance. Ties go to the pair
// whose left member comes first in the registry.
std::optional<SymmetryPair> most_asymmetric_pair(const ActionValueSet& s);

enum class Provenance { kService, kRuleBased };
std::string_view ToString(Provenance p);

struct TeacherCacheEntry {
  std::string key;
  SemanticDescription description;
  Provenance provenance = Provenance::kRuleBased;
  std::string prompt_version;
};

// SHA-256 over the rendered coefficient JSON and the prompt version.
std::string teacher_cache_key(const ActionValueSet& s,
                              std::string_view prompt_version = kStage1PromptVersion);

// Line-delimited cache of teacher outputs: {"key", "description",
// "provenance", "prompt_version"} per line. Appends go straight to disk so an
// interrupted run resumes where it stopped. Concurrent reads, exclusive writes.
class TeacherCache {
 public:
  TeacherCache() = default;
  // Loads existing entries; a missing file starts an empty cache.
  explicit TeacherCache(std::filesystem::path path);

  std::optional<TeacherCacheEntry> find(const std::string& key) const;
  void insert(const TeacherCacheEntry& entry);
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::string> lines_;  // key -> serialized entry
};

std::string cache_entry_to_json_line(const TeacherCacheEntry& e);
TeacherCacheEntry cache_entry_from_json_line(std::string_view line);

struct TeacherOptions {
  std::string model = "Qwen3-14B";
  DecodingParams decoding;
  // Replies that fail to parse are re-requested up to this many times.
  int max_attempts = 3;
  bool fallback_to_rules = true;
};

struct TeacherResult {
  SemanticDescription description;
  Provenance provenance;
  bool from_cache = false;
};

// Cache lookup, then the service, then (after max_attempts unparseable
// replies) the rule-based fallback. Transport failures propagate as
// ServiceError; an unparseable reply with the fallback disabled raises
// ParseError.
TeacherResult generate_description(const ActionValueSet& s,
                                   CompletionClient& client,
                                   TeacherCache& cache,
                                   const TeacherOptions& options = {});

// Extracts a description from a service reply (the object itself or its
// "analysis" member). Throws ParseError / ValidationError.
SemanticDescription parse_teacher_reply(std::string_view reply);

}  // namespace blendsem

#endif  // BLENDSEM_TEACHER_H_
