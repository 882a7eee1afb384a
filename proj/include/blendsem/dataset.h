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

#ifndef BLENDSEM_DATASET_H_
#define BLENDSEM_DATASET_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "blendsem/frame.h"

namespace blendsem {

inline constexpr std::size_t kEmotionCount = 7;

enum class Emotion {
  kHappiness,
  kNeutral,
  kSadness,
  kAnger,
  kFear,
  kSurprise,
  kDisgust,
};

std::string_view ToString(Emotion e);

// Seven-way emotion intensity distribution attached to a script line.
class EmotionVector {
 public:
  const std::array<double, kEmotionCount>& intensities() const {
    return intensities_;
  }
  // Highest intensity; ties go to the lowest index.
  Emotion dominant() const;

 private:
  friend EmotionVector normalize_emotion(std::span<const double> raw);
  std::array<double, kEmotionCount> intensities_{};
};

// Divides by the sum. Rejects negative, non-finite or all-zero input.
EmotionVector normalize_emotion(std::span<const double> raw);

// One capture session. Frames are raw until process_session() is applied.
struct RecordingSession {
  std::string subject_id;
  std::string sequence_id;
  double fps = 60.0;
  std::vector<CoefficientFrame> frames;
  CoefficientFrame neutral;
  std::vector<std::string> image_refs;
  std::optional<EmotionVector> emotion;

  // frames non-empty, image_refs aligned 1:1, fps > 0.
  void validate() const;
};

struct FramePair {
  std::string image_ref;
  CoefficientFrame frame;
};

// Keeps frames at indices floor(i * fps / target_fps), i = 0, 1, ...
std::vector<FramePair> subsample(const RecordingSession& session,
                                 double target_fps);

// Calibrates every frame against the session's neutral capture, then
// subsamples. The result carries the target rate and a zero neutral.
RecordingSession process_session(const RecordingSession& session,
                                 double target_fps);

enum class SplitName { kTrain, kVal, kTest };
std::string_view ToString(SplitName s);
std::optional<SplitName> SplitFromString(std::string_view s);

using SubjectAssignment = std::map<std::string, SplitName>;

struct PairRecord {
  std::string image_ref;
  CoefficientFrame frame;
  std::string subject_id;
  std::string sequence_id;
};

struct DatasetSplit {
  std::vector<PairRecord> train;
  std::vector<PairRecord> val;
  std::vector<PairRecord> test;
  SubjectAssignment assignment;

  const std::vector<PairRecord>& part(SplitName s) const;
  std::set<std::string> subjects(SplitName s) const;
};

// Routes every (image_ref, frame) of every session to the split its subject
// is assigned to. Throws ConfigError when a subject has no assignment.
DatasetSplit split_by_subject(const std::vector<RecordingSession>& sessions,
                              const SubjectAssignment& assignment);

// Session manifest: a JSON object with subject_id, sequence_id, fps, and the
// neutral frame file, frame file and image directory (relative paths resolve
// against the manifest's directory). "emotion" (7 numbers) is optional.
RecordingSession load_session_manifest(const std::filesystem::path& manifest);

SubjectAssignment parse_assignment(std::string_view json_text);

// Dataset store: one JSON line per processed session.
std::string session_to_json_line(const RecordingSession& s);
RecordingSession session_from_json_line(std::string_view line);
std::vector<RecordingSession> read_session_store(std::istream& in);

// Split files: one JSON line per pair with image_ref, values (61, registry
// order), subject_id and sequence_id.
std::string pair_to_json_line(const PairRecord& r);
PairRecord pair_from_json_line(std::string_view line);
std::vector<PairRecord> read_pair_file(const std::filesystem::path& path);

}  // namespace blendsem

#endif  // BLENDSEM_DATASET_H_
