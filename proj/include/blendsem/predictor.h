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

#ifndef BLENDSEM_PREDICTOR_H_
#define BLENDSEM_PREDICTOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blendsem/service.h"
#include "blendsem/target_codec.h"

namespace blendsem {

// Image-to-target prompt sent with every image.
extern const std::string_view kStage2Prompt;

// Any image -> target-text model. `timed()` is false for deterministic stubs,
// whose records carry zero latency so persisted outputs stay reproducible.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual std::string generate(const std::string& image_ref,
                               const std::string& prompt) = 0;
  virtual bool timed() const { return true; }
  // Parse mode used when the caller does not choose one.
  virtual ParseMode default_mode() const { return ParseMode::kLenient; }
};

// Always emits the all-zero target with a neutral rule-based analysis.
std::unique_ptr<Predictor> stub_neutral();

// Emits gt + N(0, sigma^2) per channel, clamped to the channel range and
// rendered through encode_target. Noise for an image depends only on
// (seed, image_ref), never on call order. Unknown image_ref -> InputError.
std::unique_ptr<Predictor> stub_noisy_oracle(
    std::map<std::string, ActionValueSet> ground_truth, double sigma,
    std::uint64_t seed);

struct ServicePredictorConfig {
  std::string model = "Qwen3-VL-4B-Instruct";
  DecodingParams decoding;
};

// Reads the image file named by image_ref and sends it with the prompt.
// Missing files raise InputError.
class ServicePredictor : public Predictor {
 public:
  ServicePredictor(std::shared_ptr<CompletionClient> client,
                   ServicePredictorConfig config);
  std::string generate(const std::string& image_ref,
                       const std::string& prompt) override;

 private:
  std::shared_ptr<CompletionClient> client_;
  ServicePredictorConfig config_;
};

struct PredictionRecord {
  std::string image_ref;
  std::string raw_text;
  std::optional<ParsedPrediction> parsed;
  std::string error;  // parse failure message when parsed is empty
  double latency_seconds = 0.0;
};

// Calls the predictor and parses its text. Parse failures are recorded, not
// thrown; transport and input errors propagate.
PredictionRecord predict(const std::string& image_ref, Predictor& predictor,
                         std::string_view prompt = kStage2Prompt,
                         std::optional<ParseMode> mode = std::nullopt);

std::string prediction_to_json_line(const PredictionRecord& r);
PredictionRecord prediction_from_json_line(std::string_view line);

}  // namespace blendsem

#endif  // BLENDSEM_PREDICTOR_H_
