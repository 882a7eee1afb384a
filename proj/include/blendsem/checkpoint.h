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

#ifndef BLENDSEM_CHECKPOINT_H_
#define BLENDSEM_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blendsem/trainer.h"

namespace blendsem {

inline constexpr int kCheckpointVersion = 1;

// Text dump of the evaluator. Doubles are written in shortest round-trip
// form, so a reloaded evaluator reproduces embeddings bit for bit.
std::string checkpoint_to_string(const Evaluator& evaluator);
Evaluator checkpoint_from_string(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Evaluator& evaluator);
Evaluator load_checkpoint(const std::filesystem::path& path);

struct EmbeddingRecord {
  std::string id;
  std::vector<double> vector;
};

// One {"id": ..., "vector": [...]} object per line. Reading rejects ragged
// widths (StructuralError) and duplicate ids (ValidationError).
std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path);
std::string embeddings_to_jsonl(const std::vector<EmbeddingRecord>& records);

// Rows in record order.
Eigen::MatrixXd to_matrix(const std::vector<EmbeddingRecord>& records);

}  // namespace blendsem

#endif  // BLENDSEM_CHECKPOINT_H_
