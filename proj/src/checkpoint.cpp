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

#include "blendsem/checkpoint.h"

#include <set>
#include <sstream>

#include "json.hpp"

#include "blendsem/error.h"
#include "blendsem/frame_io.h"

namespace blendsem {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "blendsem-evaluator";

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows,
                                 Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw StructuralError(std::string("checkpoint: bad row count for ") + what);
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError(std::string("checkpoint: bad column count for ") + what);
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j, Eigen::Index n, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw StructuralError(std::string("checkpoint: bad length for ") + what);
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json encoder_to_json(const Encoder& e) {
  const auto& s = e.spec();
  const auto& p = e.params();
  return {{"spec",
           {{"input_dim", s.input_dim},
            {"hidden_dim", s.hidden_dim},
            {"output_dim", s.output_dim}}},
          {"w1", matrix_to_json(p.w1)},
          {"b1", vector_to_json(p.b1)},
          {"w2", matrix_to_json(p.w2)},
          {"b2", vector_to_json(p.b2)}};
}

Encoder encoder_from_json(const json& j) {
  EncoderSpec s;
  s.input_dim = j.at("spec").at("input_dim").get<int>();
  s.hidden_dim = j.at("spec").at("hidden_dim").get<int>();
  s.output_dim = j.at("spec").at("output_dim").get<int>();
  if (s.input_dim <= 0 || s.hidden_dim <= 0 || s.output_dim <= 0) {
    throw StructuralError("checkpoint: non-positive encoder dimension");
  }
  EncoderParams p;
  p.w1 = matrix_from_json(j.at("w1"), s.hidden_dim, s.input_dim, "w1");
  p.b1 = vector_from_json(j.at("b1"), s.hidden_dim, "b1");
  p.w2 = matrix_from_json(j.at("w2"), s.output_dim, s.hidden_dim, "w2");
  p.b2 = vector_from_json(j.at("b2"), s.output_dim, "b2");
  return Encoder(s, std::move(p));
}

json config_to_json(const TrainConfig& c) {
  return {{"temperature", c.temperature}, {"learning_rate", c.learning_rate},
          {"weight_decay", c.weight_decay}, {"max_epochs", c.max_epochs},
          {"patience", c.patience},       {"batch_size", c.batch_size},
          {"seed", c.seed},               {"hidden_dim", c.hidden_dim},
          {"output_dim", c.output_dim},   {"epoch_limit", c.epoch_limit}};
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.temperature = j.at("temperature").get<double>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.max_epochs = j.at("max_epochs").get<int>();
  c.patience = j.at("patience").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.output_dim = j.at("output_dim").get<int>();
  c.epoch_limit = j.value("epoch_limit", 0);
  return c;
}

}  // namespace

std::string checkpoint_to_string(const Evaluator& ev) {
  json j = {{"format", kFormat},
            {"version", kCheckpointVersion},
            {"config", config_to_json(ev.config)},
            {"zscore",
             {{"mean", vector_to_json(ev.motion_stats.mean)},
              {"std", vector_to_json(ev.motion_stats.std)}}},
            {"image_encoder", encoder_to_json(ev.image_encoder)},
            {"motion_encoder", encoder_to_json(ev.motion_encoder)}};
  return j.dump() + "\n";
}

Evaluator checkpoint_from_string(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError("checkpoint is not a JSON object");
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ParseError("not an evaluator checkpoint");
    }
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw ParseError("unsupported checkpoint version " + std::to_string(version));
    }
    Evaluator ev;
    ev.config = config_from_json(j.at("config"));
    ev.image_encoder = encoder_from_json(j.at("image_encoder"));
    ev.motion_encoder = encoder_from_json(j.at("motion_encoder"));
    const Eigen::Index d = ev.motion_encoder.spec().input_dim;
    ev.motion_stats.mean = vector_from_json(j.at("zscore").at("mean"), d, "mean");
    ev.motion_stats.std = vector_from_json(j.at("zscore").at("std"), d, "std");
    if (ev.image_encoder.spec().output_dim != ev.motion_encoder.spec().output_dim) {
      throw StructuralError("checkpoint: encoders disagree on output width");
    }
    return ev;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Evaluator& ev) {
  write_file_atomic(path, checkpoint_to_string(ev));
}

Evaluator load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_string(read_file(path));
}

std::vector<EmbeddingRecord> read_embeddings(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<EmbeddingRecord> out;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": not a JSON object");
    }
    EmbeddingRecord r;
    try {
      r.id = j.at("id").get<std::string>();
      r.vector = j.at("vector").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
    if (r.vector.empty()) {
      throw StructuralError(path.string() + ":" + std::to_string(line_no) +
                            ": empty vector");
    }
    if (!out.empty() && r.vector.size() != out.front().vector.size()) {
      throw StructuralError(path.string() + ":" + std::to_string(line_no) +
                            ": vector width " + std::to_string(r.vector.size()) +
                            " differs from " +
                            std::to_string(out.front().vector.size()));
    }
    if (!seen.insert(r.id).second) {
      throw ValidationError("duplicate embedding id '" + r.id + "'", r.id);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string embeddings_to_jsonl(const std::vector<EmbeddingRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += json{{"id", r.id}, {"vector", r.vector}}.dump();
    out.push_back('\n');
  }
  return out;
}

Eigen::MatrixXd to_matrix(const std::vector<EmbeddingRecord>& records) {
  if (records.empty()) return {};
  const auto d = static_cast<Eigen::Index>(records.front().vector.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(records.size()), d);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (static_cast<Eigen::Index>(records[i].vector.size()) != d) {
      throw StructuralError("embedding widths differ");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      m(static_cast<Eigen::Index>(i), c) = records[i].vector[static_cast<std::size_t>(c)];
    }
  }
  return m;
}

}  // namespace blendsem
