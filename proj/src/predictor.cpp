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

#include "blendsem/predictor.h"

#include <chrono>
#include <filesystem>
#include <random>

#include "blendsem/error.h"
#include "blendsem/frame_io.h"
#include "blendsem/numeric_format.h"
#include "blendsem/teacher.h"
#include "description_json.h"

namespace blendsem {

const std::string_view kStage2Prompt =
    "You are an expert in Facial Action Coding System (FACS) and ARKit facial "
    "expression analysis.\n"
    "\n"
    "Given a facial image, provide a two-part analysis.\n"
    "\n"
    "Part 1: \"analysis\"\n"
    "Analyze the facial expression with the following structure:\n"
    "- expression_category: the most likely facial expression category\n"
    "- muscle_movements: detailed facial muscle movements with intensity (by "
    "region: eyebrows, eyes, cheeks, mouth, jaw)\n"
    "- emotional_implication: emotional meaning only if clearly observable "
    "from facial muscles\n"
    "- symmetry: describe left-right facial symmetry or any notable asymmetry\n"
    "\n"
    "Part 2: \"arkit\"\n"
    "Generate a complete JSON object mapping every ARKit blendshape "
    "coefficient name to a precise value with three decimal places.\n"
    "\n"
    "Requirements:\n"
    "- Return only a valid JSON object with two keys: \"analysis\" and "
    "\"arkit\".\n"
    "- The \"arkit\" field must contain all 61 ARKit coefficients.\n";

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class NeutralStub : public Predictor {
 public:
  NeutralStub() {
    const ActionValueSet zero;
    text_ = encode_target(rule_based_description(zero), zero).raw_text;
  }
  std::string generate(const std::string&, const std::string&) override {
    return text_;
  }
  bool timed() const override { return false; }
  ParseMode default_mode() const override { return ParseMode::kStrict; }

 private:
  std::string text_;
};

class NoisyOracleStub : public Predictor {
 public:
  NoisyOracleStub(std::map<std::string, ActionValueSet> gt, double sigma,
                  std::uint64_t seed)
      : gt_(std::move(gt)), sigma_(sigma), seed_(seed) {
    if (!(sigma >= 0.0)) throw ParameterError("sigma must be >= 0");
  }

  std::string generate(const std::string& image_ref,
                       const std::string&) override {
    auto it = gt_.find(image_ref);
    if (it == gt_.end()) {
      throw InputError("no ground truth for image '" + image_ref + "'");
    }
    const auto h = fnv1a(image_ref);
    std::seed_seq seq{static_cast<std::uint32_t>(seed_),
                      static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(h),
                      static_cast<std::uint32_t>(h >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);
    CoefficientArray v{};
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      const double eps = noise(rng);
      v[i] = clamp_channel(i, it->second[i] + sigma_ * eps);
    }
    const ActionValueSet noisy{CoefficientFrame(v)};
    return encode_target(rule_based_description(noisy), noisy).raw_text;
  }
  bool timed() const override { return false; }
  ParseMode default_mode() const override { return ParseMode::kStrict; }

 private:
  std::map<std::string, ActionValueSet> gt_;
  double sigma_;
  std::uint64_t seed_;
};

std::string mime_for(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".png") return "image/png";
  if (ext == ".webp") return "image/webp";
  return "image/jpeg";
}

}  // namespace

std::unique_ptr<Predictor> stub_neutral() {
  return std::make_unique<NeutralStub>();
}

std::unique_ptr<Predictor> stub_noisy_oracle(
    std::map<std::string, ActionValueSet> ground_truth, double sigma,
    std::uint64_t seed) {
  return std::make_unique<NoisyOracleStub>(std::move(ground_truth), sigma, seed);
}

ServicePredictor::ServicePredictor(std::shared_ptr<CompletionClient> client,
                                   ServicePredictorConfig config)
    : client_(std::move(client)), config_(std::move(config)) {}

std::string ServicePredictor::generate(const std::string& image_ref,
                                       const std::string& prompt) {
  const std::filesystem::path path(image_ref);
  if (!std::filesystem::is_regular_file(path)) {
    throw InputError("image not found: " + image_ref);
  }
  CompletionRequest request;
  request.model = config_.model;
  request.prompt = prompt;
  request.decoding = config_.decoding;
  request.image = ImagePayload{mime_for(path), read_file(path)};
  return client_->complete(request);
}

PredictionRecord predict(const std::string& image_ref, Predictor& predictor,
                         std::string_view prompt,
                         std::optional<ParseMode> mode) {
  PredictionRecord rec;
  rec.image_ref = image_ref;
  const auto start = std::chrono::steady_clock::now();
  rec.raw_text = predictor.generate(image_ref, std::string(prompt));
  if (predictor.timed()) {
    rec.latency_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  }
  try {
    rec.parsed = parse_prediction(rec.raw_text,
                                  mode.value_or(predictor.default_mode()));
  } catch (const ParseError& e) {
    rec.error = e.what();
  } catch (const ValidationError& e) {
    rec.error = e.what();
  }
  return rec;
}

std::string prediction_to_json_line(const PredictionRecord& r) {
  std::string out = "{\"image_ref\":" + json(r.image_ref).dump() +
                    ",\"raw_text\":" + json(r.raw_text).dump() + ",\"parsed\":";
  if (r.parsed) {
    out += "{\"analysis\":" + description_to_json(r.parsed->analysis) +
           ",\"arkit\":{";
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      if (i) out.push_back(',');
      out += "\"" + std::string(ActionRegistry::name(i)) +
             "\":" + format_shortest(r.parsed->arkit[i]);
    }
    out += "}}";
  } else {
    out += "null";
  }
  out += ",\"repairs\":[";
  if (r.parsed) {
    for (std::size_t i = 0; i < r.parsed->repairs.size(); ++i) {
      const auto& rep = r.parsed->repairs[i];
      if (i) out.push_back(',');
      out += "{\"kind\":" + json(std::string(ToString(rep.kind))).dump() +
             ",\"key\":" + json(rep.key).dump() +
             ",\"detail\":" + json(rep.detail).dump() + "}";
    }
  }
  out += "],\"error\":" + json(r.error).dump() +
         ",\"latency\":" + format_shortest(r.latency_seconds) + "}";
  return out;
}

PredictionRecord prediction_from_json_line(std::string_view line) {
  const json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError("malformed prediction record");
  }
  PredictionRecord r;
  try {
    r.image_ref = j.at("image_ref").get<std::string>();
    r.raw_text = j.at("raw_text").get<std::string>();
    r.error = j.value("error", std::string());
    r.latency_seconds = j.value("latency", 0.0);
    const auto& p = j.at("parsed");
    if (!p.is_null()) {
      ParsedPrediction parsed;
      parsed.analysis = internal::description_from_json(p.at("analysis"), nullptr);
      parsed.arkit = ActionValueSet::from_map(
          p.at("arkit").get<std::map<std::string, double>>());
      static const std::map<std::string, Repair::Kind> kKinds = {
          {"filled_missing", Repair::Kind::kFilledMissing},
          {"clamped", Repair::Kind::kClamped},
          {"dropped_unknown", Repair::Kind::kDroppedUnknown},
          {"coerced", Repair::Kind::kCoerced},
          {"defaulted", Repair::Kind::kDefaulted}};
      for (const auto& rep : j.at("repairs")) {
        parsed.repairs.push_back({kKinds.at(rep.at("kind").get<std::string>()),
                                  rep.at("key").get<std::string>(),
                                  rep.at("detail").get<std::string>()});
      }
      r.parsed = std::move(parsed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed prediction record: ") + e.what());
  } catch (const std::out_of_range&) {
    throw ParseError("prediction record has an unknown repair kind");
  }
  return r;
}

}  // namespace blendsem
