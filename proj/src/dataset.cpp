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

#include "blendsem/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "blendsem/error.h"
#include "blendsem/frame_io.h"
#include "blendsem/numeric_format.h"
#include "json.hpp"

namespace blendsem {
namespace {

using nlohmann::json;

std::string quote(std::string_view s) { return json(std::string(s)).dump(); }

void append_values(std::string& out, const CoefficientFrame& f) {
  out.push_back('[');
  for (ActionIndex i = 0; i < kActionCount; ++i) {
    if (i) out.push_back(',');
    out += format_shortest(f[i]);
  }
  out.push_back(']');
}

CoefficientFrame frame_from_json(const json& arr, const std::string& ctx) {
  if (!arr.is_array()) throw ValidationError(ctx + ": values must be an array");
  if (arr.size() != kActionCount) {
    throw StructuralError(ctx + ": expected " + std::to_string(kActionCount) +
                          " values, got " + std::to_string(arr.size()));
  }
  CoefficientArray v{};
  for (std::size_t i = 0; i < kActionCount; ++i) {
    if (!arr[i].is_number()) {
      std::string name(ActionRegistry::name(i));
      throw ValidationError(ctx + ": non-numeric value for " + name, name);
    }
    v[i] = arr[i].get<double>();
  }
  return CoefficientFrame(v);
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) {
    throw ValidationError(ctx + ": missing field '" + key + "'", key);
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key,
                           const std::string& ctx) {
  const auto& v = require(obj, key, ctx);
  if (!v.is_string()) {
    throw ValidationError(ctx + ": field '" + key + "' must be a string", key);
  }
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key,
                      const std::string& ctx) {
  const auto& v = require(obj, key, ctx);
  if (!v.is_number()) {
    throw ValidationError(ctx + ": field '" + key + "' must be a number", key);
  }
  return v.get<double>();
}

json parse_json(std::string_view text, const std::string& ctx) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

}  // namespace

std::string_view ToString(Emotion e) {
  static constexpr std::array<std::string_view, kEmotionCount> kNames = {
      "happiness", "neutral", "sadness", "anger",
      "fear",      "surprise", "disgust"};
  return kNames[static_cast<std::size_t>(e)];
}

Emotion EmotionVector::dominant() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kEmotionCount; ++i) {
    if (intensities_[i] > intensities_[best]) best = i;
  }
  return static_cast<Emotion>(best);
}

EmotionVector normalize_emotion(std::span<const double> raw) {
  if (raw.size() != kEmotionCount) {
    throw StructuralError("emotion vector needs 7 entries, got " +
                          std::to_string(raw.size()));
  }
  double sum = 0.0;
  for (double x : raw) {
    if (!std::isfinite(x) || x < 0.0) {
      throw ValidationError("emotion intensities must be finite and >= 0");
    }
    sum += x;
  }
  if (!(sum > 0.0)) throw ValidationError("emotion vector is all zero");
  EmotionVector out;
  for (std::size_t i = 0; i < kEmotionCount; ++i) {
    out.intensities_[i] = raw[i] / sum;
  }
  return out;
}

void RecordingSession::validate() const {
  const std::string ctx = "session " + subject_id + "/" + sequence_id;
  if (frames.empty()) throw ValidationError(ctx + ": no frames");
  if (image_refs.size() != frames.size()) {
    throw StructuralError(ctx + ": " + std::to_string(image_refs.size()) +
                          " image refs for " + std::to_string(frames.size()) +
                          " frames");
  }
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw ParameterError(ctx + ": fps must be positive");
  }
}

std::vector<FramePair> subsample(const RecordingSession& session,
                                 double target_fps) {
  session.validate();
  if (!(target_fps > 0.0)) throw ParameterError("target fps must be positive");
  if (target_fps > session.fps) {
    throw ParameterError("target fps " + format_shortest(target_fps) +
                         " exceeds session fps " +
                         format_shortest(session.fps));
  }
  const double stride = session.fps / target_fps;
  const std::size_t n = session.frames.size();
  std::vector<FramePair> out;
  std::size_t last = n;  // sentinel: nothing kept yet
  for (std::size_t i = 0;; ++i) {
    // The epsilon absorbs representation error in non-integer strides.
    const double pos = static_cast<double>(i) * stride;
    const auto idx = static_cast<std::size_t>(std::floor(pos + 1e-9 * pos + 1e-12));
    if (idx >= n) break;
    if (idx == last) continue;
    out.push_back({session.image_refs[idx], session.frames[idx]});
    last = idx;
  }
  return out;
}

RecordingSession process_session(const RecordingSession& session,
                                 double target_fps) {
  session.validate();
  RecordingSession calibrated = session;
  for (auto& f : calibrated.frames) f = calibrate(f, session.neutral);
  auto pairs = subsample(calibrated, target_fps);

  RecordingSession out;
  out.subject_id = session.subject_id;
  out.sequence_id = session.sequence_id;
  out.fps = target_fps;
  out.neutral = CoefficientFrame::zeros();
  out.emotion = session.emotion;
  out.frames.reserve(pairs.size());
  out.image_refs.reserve(pairs.size());
  for (auto& p : pairs) {
    out.frames.push_back(std::move(p.frame));
    out.image_refs.push_back(std::move(p.image_ref));
  }
  return out;
}

std::string_view ToString(SplitName s) {
  switch (s) {
    case SplitName::kTrain:
      return "train";
    case SplitName::kVal:
      return "val";
    case SplitName::kTest:
      return "test";
  }
  return "";
}

std::optional<SplitName> SplitFromString(std::string_view s) {
  if (s == "train") return SplitName::kTrain;
  if (s == "val") return SplitName::kVal;
  if (s == "test") return SplitName::kTest;
  return std::nullopt;
}

const std::vector<PairRecord>& DatasetSplit::part(SplitName s) const {
  switch (s) {
    case SplitName::kTrain:
      return train;
    case SplitName::kVal:
      return val;
    case SplitName::kTest:
      return test;
  }
  return train;
}

std::set<std::string> DatasetSplit::subjects(SplitName s) const {
  std::set<std::string> out;
  for (const auto& r : part(s)) out.insert(r.subject_id);
  return out;
}

DatasetSplit split_by_subject(const std::vector<RecordingSession>& sessions,
                              const SubjectAssignment& assignment) {
  DatasetSplit split;
  split.assignment = assignment;
  for (const auto& s : sessions) {
    s.validate();
    auto it = assignment.find(s.subject_id);
    if (it == assignment.end()) {
      throw ConfigError("subject '" + s.subject_id +
                        "' has no split assignment");
    }
    auto& dst = it->second == SplitName::kTrain ? split.train
                : it->second == SplitName::kVal ? split.val
                                                : split.test;
    for (std::size_t i = 0; i < s.frames.size(); ++i) {
      dst.push_back({s.image_refs[i], s.frames[i], s.subject_id, s.sequence_id});
    }
  }
  return split;
}

RecordingSession load_session_manifest(const std::filesystem::path& manifest) {
  namespace fs = std::filesystem;
  const std::string ctx = "manifest " + manifest.string();
  const json m = parse_json(read_file(manifest), ctx);
  if (!m.is_object()) throw ValidationError(ctx + ": not a JSON object");

  static const std::set<std::string> kKnown = {
      "subject_id", "sequence_id", "fps", "neutral", "frames", "images",
      "emotion"};
  for (const auto& [key, _] : m.items()) {
    if (!kKnown.count(key)) {
      throw ValidationError(ctx + ": unknown field '" + key + "'", key);
    }
  }

  const fs::path base = manifest.parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return (path.is_absolute() ? path : base / path).lexically_normal();
  };

  RecordingSession s;
  s.subject_id = require_string(m, "subject_id", ctx);
  s.sequence_id = require_string(m, "sequence_id", ctx);
  s.fps = require_number(m, "fps", ctx);

  auto neutral = read_frame_file(resolve(require_string(m, "neutral", ctx)));
  if (neutral.size() != 1) {
    throw ValidationError(ctx + ": neutral file must hold exactly one frame");
  }
  s.neutral = neutral.front();
  s.frames = read_frame_file(resolve(require_string(m, "frames", ctx)));

  const fs::path images = resolve(require_string(m, "images", ctx));
  if (!fs::is_directory(images)) {
    throw InputError(ctx + ": image directory " + images.string() +
                     " not found");
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(images)) {
    if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  for (const auto& n : names) s.image_refs.push_back((images / n).generic_string());

  if (m.contains("emotion")) {
    const auto& e = m.at("emotion");
    if (!e.is_array()) throw ValidationError(ctx + ": emotion must be an array");
    std::vector<double> raw;
    for (const auto& x : e) {
      if (!x.is_number()) throw ValidationError(ctx + ": emotion must be numeric");
      raw.push_back(x.get<double>());
    }
    s.emotion = normalize_emotion(raw);
  }
  s.validate();
  return s;
}

SubjectAssignment parse_assignment(std::string_view json_text) {
  const json a = parse_json(json_text, "assignment");
  if (!a.is_object()) throw ConfigError("assignment must be a JSON object");
  SubjectAssignment out;
  for (const auto& [subject, value] : a.items()) {
    std::optional<SplitName> s;
    if (value.is_string()) s = SplitFromString(value.get<std::string>());
    if (!s) {
      throw ConfigError("subject '" + subject +
                        "' must map to train, val or test");
    }
    out.emplace(subject, *s);
  }
  return out;
}

std::string session_to_json_line(const RecordingSession& s) {
  std::string out = "{\"subject_id\":" + quote(s.subject_id) +
                    ",\"sequence_id\":" + quote(s.sequence_id) +
                    ",\"fps\":" + format_shortest(s.fps);
  if (s.emotion) {
    out += ",\"emotion\":[";
    const auto& e = s.emotion->intensities();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out.push_back(',');
      out += format_shortest(e[i]);
    }
    out += "],\"dominant_emotion\":" +
           quote(ToString(s.emotion->dominant()));
  }
  out += ",\"neutral\":";
  append_values(out, s.neutral);
  out += ",\"pairs\":[";
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    if (i) out.push_back(',');
    out += "{\"image_ref\":" + quote(s.image_refs[i]) + ",\"values\":";
    append_values(out, s.frames[i]);
    out.push_back('}');
  }
  out += "]}";
  return out;
}

RecordingSession session_from_json_line(std::string_view line) {
  const std::string ctx = "session record";
  const json j = parse_json(line, ctx);
  RecordingSession s;
  s.subject_id = require_string(j, "subject_id", ctx);
  s.sequence_id = require_string(j, "sequence_id", ctx);
  s.fps = require_number(j, "fps", ctx);
  s.neutral = frame_from_json(require(j, "neutral", ctx), ctx);
  if (j.contains("emotion")) {
    s.emotion = normalize_emotion(j.at("emotion").get<std::vector<double>>());
  }
  for (const auto& p : require(j, "pairs", ctx)) {
    s.image_refs.push_back(require_string(p, "image_ref", ctx));
    s.frames.push_back(frame_from_json(require(p, "values", ctx), ctx));
  }
  s.validate();
  return s;
}

std::vector<RecordingSession> read_session_store(std::istream& in) {
  std::vector<RecordingSession> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(session_from_json_line(line));
  }
  return out;
}

std::string pair_to_json_line(const PairRecord& r) {
  std::string out = "{\"image_ref\":" + quote(r.image_ref) + ",\"values\":";
  append_values(out, r.frame);
  out += ",\"subject_id\":" + quote(r.subject_id) +
         ",\"sequence_id\":" + quote(r.sequence_id) + "}";
  return out;
}

PairRecord pair_from_json_line(std::string_view line) {
  const std::string ctx = "split record";
  const json j = parse_json(line, ctx);
  PairRecord r;
  r.image_ref = require_string(j, "image_ref", ctx);
  r.frame = frame_from_json(require(j, "values", ctx), ctx);
  r.subject_id = require_string(j, "subject_id", ctx);
  r.sequence_id = require_string(j, "sequence_id", ctx);
  return r;
}

std::vector<PairRecord> read_pair_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open split file " + path.string());
  std::vector<PairRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(pair_from_json_line(line));
  }
  return out;
}

}  // namespace blendsem
