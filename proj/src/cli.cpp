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

#include "blendsem/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "blendsem/checkpoint.h"
#include "blendsem/dataset.h"
#include "blendsem/error.h"
#include "blendsem/frame_io.h"
#include "blendsem/metrics.h"
#include "blendsem/numeric_format.h"
#include "blendsem/predictor.h"
#include "blendsem/report.h"
#include "blendsem/stats.h"
#include "blendsem/target_codec.h"
#include "blendsem/teacher.h"
#include "blendsem/trainer.h"
#include "json.hpp"

namespace blendsem {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kEvaluationVersion = 1;

struct Globals {
  std::uint64_t seed = 42;
  int jobs = 1;
};

struct IngestOptions {
  std::vector<std::string> manifests;
  double target_fps = 2.0;
  std::string out;
};

struct SplitOptions {
  std::string store;
  std::string assignment;
  std::string out_dir;
};

struct TeachOptions {
  std::string pairs;
  std::string cache;
  std::string mode = "rule";
  std::string endpoint;
  std::string model = "Qwen3-14B";
  int max_tokens = 2048;
  double temperature = 0.0;
};

struct EncodeOptions {
  std::string pairs;
  std::string cache;
  std::string out;
};

struct PredictOptions {
  std::string pairs;
  std::string out;
  std::string predictor = "noisy-oracle";
  double sigma = 0.0;
  std::string mode;  // empty: predictor default
  std::string endpoint;
  std::string model = "Qwen3-VL-4B-Instruct";
  int max_tokens = 2048;
  double temperature = 0.0;
};

struct TrainEvalOptions {
  std::string train_pairs;
  std::string train_embeddings;
  std::string val_pairs;
  std::string val_embeddings;
  std::string out;
  std::string curve;
  TrainConfig config;
};

struct EvaluateOptions {
  std::string pairs;
  std::string predictions;
  bool gt_as_prediction = false;
  std::string checkpoint;
  std::string embeddings;
  std::string method = "model";
  double threshold = kDefaultAccuracyThreshold;
  std::vector<int> rp_k = {1, 2, 3};
  int batch_size = 32;
  std::string out;
};

struct ReportOptions {
  std::vector<std::string> evaluations;
  std::vector<std::string> compare;
  std::string text;
  std::string jsonl;
};

// ---------------------------------------------------------------------------
// Shared helpers

std::string read_text(const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("file not found: " + path);
  return read_file(path);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
  }
  return out;
}

std::vector<PairRecord> load_pairs(const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("file not found: " + path);
  auto pairs = read_pair_file(path);
  std::set<std::string> seen;
  for (const auto& p : pairs) {
    if (!seen.insert(p.image_ref).second) {
      throw ValidationError(path + ": duplicate image_ref '" + p.image_ref + "'",
                            p.image_ref);
    }
  }
  return pairs;
}

std::map<std::string, std::vector<double>> load_embedding_map(
    const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("file not found: " + path);
  std::map<std::string, std::vector<double>> out;
  for (auto& r : read_embeddings(path)) out.emplace(r.id, std::move(r.vector));
  return out;
}

// Description embeddings and raw motion rows joined by image_ref.
PairedFeatures join_features(const std::vector<PairRecord>& pairs,
                             const std::map<std::string, std::vector<double>>& emb,
                             const std::vector<CoefficientFrame>& motion) {
  if (pairs.empty()) throw ValidationError("no pairs to embed");
  const auto first = emb.find(pairs.front().image_ref);
  if (first == emb.end()) {
    throw InputError("no description embedding for '" + pairs.front().image_ref +
                     "'");
  }
  const auto width = static_cast<Eigen::Index>(first->second.size());
  const auto n = static_cast<Eigen::Index>(pairs.size());
  PairedFeatures f{Eigen::MatrixXd(n, width), Eigen::MatrixXd(n, kActionCount)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& ref = pairs[static_cast<std::size_t>(i)].image_ref;
    const auto it = emb.find(ref);
    if (it == emb.end()) {
      throw InputError("no description embedding for '" + ref + "'");
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      f.image(i, c) = it->second[static_cast<std::size_t>(c)];
    }
    const auto& v = motion[static_cast<std::size_t>(i)].values();
    for (ActionIndex c = 0; c < kActionCount; ++c) {
      f.motion(i, static_cast<Eigen::Index>(c)) = v[c];
    }
  }
  return f;
}

std::vector<CoefficientFrame> frames_of(const std::vector<PairRecord>& pairs) {
  std::vector<CoefficientFrame> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.frame);
  return out;
}

ordered_json opt_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> opt_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::shared_ptr<CompletionClient> make_client(const std::string& endpoint,
                                              int jobs) {
  if (endpoint.empty()) throw ConfigError("service mode needs --endpoint");
  HttpClientConfig cfg;
  cfg.endpoint = endpoint;
  auto http = std::make_shared<HttpCompletionClient>(cfg);
  return std::make_shared<BoundedClient>(http, std::max(1, jobs));
}

// ---------------------------------------------------------------------------
// Commands

void cmd_ingest(const IngestOptions& o, std::ostream& out) {
  if (o.manifests.empty()) throw ConfigError("ingest needs at least one --manifest");
  std::vector<RecordingSession> sessions;
  for (const auto& m : o.manifests) {
    if (!fs::is_regular_file(m)) throw InputError("manifest not found: " + m);
    sessions.push_back(process_session(load_session_manifest(m), o.target_fps));
  }
  std::sort(sessions.begin(), sessions.end(),
            [](const RecordingSession& a, const RecordingSession& b) {
              return std::tie(a.subject_id, a.sequence_id) <
                     std::tie(b.subject_id, b.sequence_id);
            });
  std::set<std::pair<std::string, std::string>> ids;
  std::size_t frames = 0;
  std::string text;
  for (const auto& s : sessions) {
    if (!ids.emplace(s.subject_id, s.sequence_id).second) {
      throw ValidationError("duplicate session " + s.subject_id + "/" +
                            s.sequence_id);
    }
    frames += s.frames.size();
    text += session_to_json_line(s) + "\n";
  }
  write_file_atomic(o.out, text);
  out << "ingested " << sessions.size() << " sessions, " << frames
      << " frames -> " << o.out << "\n";
}

void cmd_split(const SplitOptions& o, std::ostream& out) {
  std::istringstream store(read_text(o.store));
  const auto sessions = read_session_store(store);
  const auto assignment = parse_assignment(read_text(o.assignment));
  const DatasetSplit split = split_by_subject(sessions, assignment);
  // Render everything before writing so a failure leaves no partial output.
  std::vector<std::pair<fs::path, std::string>> files;
  for (SplitName s : {SplitName::kTrain, SplitName::kVal, SplitName::kTest}) {
    std::string text;
    for (const auto& p : split.part(s)) text += pair_to_json_line(p) + "\n";
    files.emplace_back(fs::path(o.out_dir) / (std::string(ToString(s)) + ".jsonl"),
                       std::move(text));
  }
  fs::create_directories(o.out_dir);
  for (const auto& [path, text] : files) write_file_atomic(path, text);
  out << "train " << split.train.size() << ", val " << split.val.size()
      << ", test " << split.test.size() << " pairs -> " << o.out_dir << "\n";
}

void cmd_teach(const TeachOptions& o, const Globals& g, std::ostream& out) {
  const auto pairs = load_pairs(o.pairs);
  TeacherCache cache{fs::path(o.cache)};
  const std::size_t before = cache.size();
  if (o.mode == "rule") {
    for (const auto& p : pairs) {
      const ActionValueSet s{p.frame};
      const auto key = teacher_cache_key(s);
      if (cache.find(key)) continue;
      cache.insert({key, rule_based_description(s), Provenance::kRuleBased,
                    std::string(kStage1PromptVersion)});
    }
  } else if (o.mode == "service") {
    auto client = make_client(o.endpoint, g.jobs);
    TeacherOptions topt;
    topt.model = o.model;
    topt.decoding = {o.temperature, o.max_tokens};
    parallel_for(pairs.size(), g.jobs, [&](std::size_t i) {
      generate_description(ActionValueSet{pairs[i].frame}, *client, cache, topt);
    });
  } else {
    throw ConfigError("unknown teach mode '" + o.mode + "' (rule or service)");
  }
  out << "cache " << o.cache << ": " << cache.size() << " entries ("
      << cache.size() - before << " new)\n";
}

void cmd_encode(const EncodeOptions& o, std::ostream& out) {
  const auto pairs = load_pairs(o.pairs);
  if (!fs::is_regular_file(o.cache)) throw InputError("cache not found: " + o.cache);
  const TeacherCache cache{fs::path(o.cache)};
  std::string text;
  for (const auto& p : pairs) {
    const ActionValueSet s{p.frame};
    const auto entry = cache.find(teacher_cache_key(s));
    if (!entry) {
      throw ConfigError("no cached description for '" + p.image_ref +
                        "'; run teach first");
    }
    const TargetSequence t = encode_target(entry->description, s);
    ordered_json line = {{"image_ref", p.image_ref},
                         {"provenance", std::string(ToString(entry->provenance))},
                         {"target", t.raw_text}};
    text += line.dump() + "\n";
  }
  write_file_atomic(o.out, text);
  out << "encoded " << pairs.size() << " targets -> " << o.out << "\n";
}

void cmd_predict(const PredictOptions& o, const Globals& g, std::ostream& out) {
  const auto pairs = load_pairs(o.pairs);
  std::unique_ptr<Predictor> predictor;
  if (o.predictor == "neutral") {
    predictor = stub_neutral();
  } else if (o.predictor == "noisy-oracle") {
    std::map<std::string, ActionValueSet> gt;
    for (const auto& p : pairs) gt.emplace(p.image_ref, ActionValueSet{p.frame});
    predictor = stub_noisy_oracle(std::move(gt), o.sigma, g.seed);
  } else if (o.predictor == "service") {
    ServicePredictorConfig cfg;
    cfg.model = o.model;
    cfg.decoding = {o.temperature, o.max_tokens};
    predictor = std::make_unique<ServicePredictor>(make_client(o.endpoint, g.jobs),
                                                   cfg);
  } else {
    throw ConfigError("unknown predictor '" + o.predictor +
                      "' (neutral, noisy-oracle or service)");
  }
  std::optional<ParseMode> mode;
  if (o.mode == "strict") {
    mode = ParseMode::kStrict;
  } else if (o.mode == "lenient") {
    mode = ParseMode::kLenient;
  } else if (!o.mode.empty()) {
    throw ConfigError("unknown parse mode '" + o.mode + "' (strict or lenient)");
  }
  std::vector<PredictionRecord> records(pairs.size());
  parallel_for(pairs.size(), g.jobs, [&](std::size_t i) {
    records[i] = predict(pairs[i].image_ref, *predictor, kStage2Prompt, mode);
  });
  std::string text;
  std::size_t failures = 0;
  for (const auto& r : records) {
    failures += r.parsed ? 0 : 1;
    text += prediction_to_json_line(r) + "\n";
  }
  write_file_atomic(o.out, text);
  out << "predicted " << records.size() << " images (" << failures
      << " parse failures) -> " << o.out << "\n";
}

void cmd_train_eval(const TrainEvalOptions& o, const Globals& g,
                    std::ostream& out) {
  TrainConfig cfg = o.config;
  cfg.seed = g.seed;
  cfg.validate();
  const auto train_pairs = load_pairs(o.train_pairs);
  const auto val_pairs = load_pairs(o.val_pairs);
  const auto train = join_features(train_pairs, load_embedding_map(o.train_embeddings),
                                   frames_of(train_pairs));
  const auto val = join_features(val_pairs, load_embedding_map(o.val_embeddings),
                                 frames_of(val_pairs));
  const FitResult fit = fit_evaluator(train, val, cfg);
  if (!o.curve.empty()) {
    std::string text;
    for (const auto& e : fit.curve) {
      text += ordered_json{{"epoch", e.epoch},
                           {"learning_rate", e.learning_rate},
                           {"train_loss", e.train_loss},
                           {"val_r_precision1", e.val_r_precision1}}
                  .dump() +
              "\n";
    }
    write_file_atomic(o.curve, text);
  }
  save_checkpoint(o.out, fit.evaluator);
  out << "trained " << fit.curve.size() << " epochs, best epoch "
      << fit.best_epoch << " val R@1 " << fit.best_val_r_precision1 << " -> "
      << o.out << "\n";
}

ordered_json per_coefficient_json(const PerCoefficientRow& r) {
  return {{"name", r.name},
          {"mse", r.mse},
          {"pearson", opt_json(r.pearson)},
          {"spearman", opt_json(r.spearman)},
          {"deviation", r.deviation}};
}

void cmd_evaluate(const EvaluateOptions& o, const Globals& g,
                  const ordered_json& config, std::ostream& out) {
  const auto pairs = load_pairs(o.pairs);
  if (pairs.empty()) throw ValidationError("no ground-truth pairs in " + o.pairs);
  if (o.gt_as_prediction == !o.predictions.empty()) {
    throw ConfigError("give exactly one of --predictions or --gt-as-prediction");
  }
  const auto gt = frames_of(pairs);
  std::vector<CoefficientFrame> pred;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> repairs;
  if (o.gt_as_prediction) {
    pred = gt;
  } else {
    std::map<std::string, PredictionRecord> by_ref;
    for (const auto& line : lines_of(read_text(o.predictions))) {
      auto r = prediction_from_json_line(line);
      const std::string ref = r.image_ref;
      if (!by_ref.emplace(ref, std::move(r)).second) {
        throw ValidationError("duplicate prediction for '" + ref + "'", ref);
      }
    }
    for (const auto& p : pairs) {
      const auto it = by_ref.find(p.image_ref);
      if (it == by_ref.end()) {
        throw ValidationError("no prediction for '" + p.image_ref + "'",
                              p.image_ref);
      }
      if (it->second.parsed) {
        pred.push_back(it->second.parsed->arkit.frame());
        for (const auto& rep : it->second.parsed->repairs) {
          ++repairs[std::string(ToString(rep.kind))];
        }
      } else {
        // Unparseable output counts as a neutral face.
        pred.push_back(CoefficientFrame::zeros());
        ++failures;
      }
    }
  }

  ordered_json retrieval = nullptr;
  std::string retrieval_status = "unavailable: no evaluator checkpoint";
  if (!o.checkpoint.empty()) {
    if (o.embeddings.empty()) {
      throw ConfigError("--checkpoint needs --embeddings for the image side");
    }
    const Evaluator ev = load_checkpoint(o.checkpoint);
    const auto feats = join_features(pairs, load_embedding_map(o.embeddings), pred);
    RetrievalProtocol protocol;
    protocol.batch_size = o.batch_size;
    protocol.seed = g.seed;
    protocol.ks = o.rp_k;
    const auto r = evaluate_retrieval(ev.embed_image(feats.image),
                                      ev.embed_motion(feats.motion), protocol);
    retrieval = {{"ks", r.ks},
                 {"r_precision", r.r_precision},
                 {"mmd", r.mmd},
                 {"batches", r.batches},
                 {"ranked_samples", r.ranked_samples}};
    retrieval_status = "ok";
  }

  const auto per_sample = per_sample_mse(pred, gt);
  const auto cc = cross_comparison(pred, gt, o.threshold);
  const auto es = error_summary(per_sample);
  const auto pc = per_coefficient_report(pred, gt);
  const auto head = head_pose_rows(pred, gt, o.method);

  ordered_json j;
  j["kind"] = "evaluation";
  j["version"] = kEvaluationVersion;
  j["config"] = config;
  j["method"] = o.method;
  j["samples"] = pairs.size();
  j["parse_failures"] = failures;
  j["repairs"] = repairs;
  j["mse"] = mse(pred, gt);
  j["retrieval_status"] = retrieval_status;
  j["retrieval"] = retrieval;
  j["cross_comparison"] = {{"threshold", cc.threshold},
                           {"pearson", opt_json(cc.pearson)},
                           {"spearman", opt_json(cc.spearman)},
                           {"accuracy", cc.accuracy},
                           {"msd", cc.msd},
                           {"deviation", cc.deviation}};
  j["error_summary"] = {{"mean", es.mean},
                        {"median", es.median},
                        {"std", es.std},
                        {"p90", es.p90}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : pc.rows) rows.push_back(per_coefficient_json(r));
  j["per_coefficient"] = rows;
  j["per_coefficient_average"] = per_coefficient_json(pc.average);
  ordered_json hp = ordered_json::array();
  for (const auto& r : head) {
    hp.push_back({{"label", r.label},
                  {"pearson", opt_json(r.pearson)},
                  {"spearman", opt_json(r.spearman)},
                  {"msd", r.msd},
                  {"deviation", r.deviation}});
  }
  j["head_pose"] = hp;
  ordered_json ps = ordered_json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ps.push_back({{"image_ref", pairs[i].image_ref}, {"mse", per_sample[i]}});
  }
  j["per_sample"] = ps;
  write_file_atomic(o.out, j.dump(2) + "\n");
  out << o.method << ": MSE " << format_fixed(mse(pred, gt), 6) << ", retrieval "
      << retrieval_status << " -> " << o.out << "\n";
}

struct LoadedEvaluation {
  std::string path;
  ordered_json json;
};

LoadedEvaluation load_evaluation(const std::string& path) {
  LoadedEvaluation e{path, ordered_json::parse(read_text(path), nullptr, false)};
  if (e.json.is_discarded() || !e.json.is_object() ||
      e.json.value("kind", "") != "evaluation") {
    throw ParseError(path + ": not an evaluation file");
  }
  if (e.json.value("version", 0) != kEvaluationVersion) {
    throw ParseError(path + ": unsupported evaluation version");
  }
  return e;
}

MainTableRow main_row(const ordered_json& j) {
  MainTableRow r;
  r.method = j.at("method").get<std::string>();
  r.mse = j.at("mse").get<double>();
  const auto& ret = j.at("retrieval");
  if (!ret.is_null()) {
    const auto ks = ret.at("ks").get<std::vector<int>>();
    const auto rp = ret.at("r_precision").get<std::vector<double>>();
    std::array<double, 3> top{};
    bool complete = true;
    for (int k = 1; k <= 3; ++k) {
      const auto it = std::find(ks.begin(), ks.end(), k);
      if (it == ks.end()) {
        complete = false;
      } else {
        top[static_cast<std::size_t>(k - 1)] =
            rp[static_cast<std::size_t>(it - ks.begin())];
      }
    }
    if (complete) r.r_precision = top;
    r.mmd = ret.at("mmd").get<double>();
  }
  const auto& cc = j.at("cross_comparison");
  r.pearson = opt_from(cc.at("pearson"));
  r.spearman = opt_from(cc.at("spearman"));
  r.accuracy = cc.at("accuracy").get<double>();
  r.msd = cc.at("msd").get<double>();
  r.deviation = cc.at("deviation").get<double>();
  return r;
}

PerCoefficientRow coefficient_row(const ordered_json& j) {
  return {j.at("name").get<std::string>(), j.at("mse").get<double>(),
          opt_from(j.at("pearson")), opt_from(j.at("spearman")),
          j.at("deviation").get<double>()};
}

void cmd_report(const ReportOptions& o, const ordered_json& config,
                std::ostream& out) {
  if (o.evaluations.empty()) throw ConfigError("report needs at least one --eval");
  std::vector<LoadedEvaluation> evals;
  std::map<std::string, std::size_t> by_method;
  for (const auto& p : o.evaluations) {
    evals.push_back(load_evaluation(p));
    const auto method = evals.back().json.at("method").get<std::string>();
    if (!by_method.emplace(method, evals.size() - 1).second) {
      throw ValidationError("two evaluations share the method name '" + method +
                            "'");
    }
  }

  try {
    std::vector<MainTableRow> main_rows;
    std::vector<ErrorSummaryRow> summary_rows;
    std::vector<HeadPoseRow> head_rows;
    for (const auto& e : evals) {
      main_rows.push_back(main_row(e.json));
      const auto& es = e.json.at("error_summary");
      summary_rows.push_back({e.json.at("method").get<std::string>(),
                              {es.at("mean").get<double>(),
                               es.at("median").get<double>(),
                               es.at("std").get<double>(),
                               es.at("p90").get<double>()}});
    }
    // Head pose rows grouped by channel, methods in input order.
    for (std::size_t c = 0; c < 3; ++c) {
      for (const auto& e : evals) {
        const auto& h = e.json.at("head_pose").at(c);
        head_rows.push_back({h.at("label").get<std::string>(),
                             opt_from(h.at("pearson")), opt_from(h.at("spearman")),
                             h.at("msd").get<double>(),
                             h.at("deviation").get<double>()});
      }
    }

    std::vector<TTestRow> ttests;
    for (const auto& spec : o.compare) {
      const auto colon = spec.find(':');
      if (colon == std::string::npos) {
        throw ConfigError("--compare expects FIRST:SECOND, got '" + spec + "'");
      }
      const std::string a = spec.substr(0, colon);
      const std::string b = spec.substr(colon + 1);
      for (const auto& m : {a, b}) {
        if (!by_method.count(m)) {
          throw ConfigError("--compare names unknown method '" + m + "'");
        }
      }
      const auto& sa = evals[by_method.at(a)].json.at("per_sample");
      const auto& sb = evals[by_method.at(b)].json.at("per_sample");
      if (sa.size() != sb.size()) {
        throw ValidationError("cannot pair " + a + " and " + b +
                              ": different sample counts");
      }
      std::vector<double> xa, xb;
      for (std::size_t i = 0; i < sa.size(); ++i) {
        if (sa[i].at("image_ref") != sb[i].at("image_ref")) {
          throw ValidationError("cannot pair " + a + " and " + b +
                                ": sample order differs at index " +
                                std::to_string(i));
        }
        xa.push_back(sa[i].at("mse").get<double>());
        xb.push_back(sb[i].at("mse").get<double>());
      }
      ttests.push_back({a + " vs " + b, paired_ttest(xa, xb)});
    }

    ordered_json inputs = ordered_json::array();
    for (const auto& e : evals) {
      inputs.push_back({{"path", e.path},
                        {"method", e.json.at("method")},
                        {"samples", e.json.at("samples")},
                        {"parse_failures", e.json.at("parse_failures")},
                        {"repairs", e.json.at("repairs")},
                        {"retrieval_status", e.json.at("retrieval_status")},
                        {"config", e.json.at("config")}});
    }
    ordered_json header = {{"config", config}, {"inputs", inputs}};

    std::string text = "# blendsem report\n# config: " + config.dump() + "\n";
    for (const auto& in : inputs) text += "# input: " + in.dump() + "\n";
    text += "\n[main comparison]\n" + render_main_table(main_rows);
    text += "\n[per-sample error summary]\n" +
            render_error_summary_table(summary_rows);
    if (!ttests.empty()) text += "\n[paired t-test]\n" + render_ttest_table(ttests);
    text += "\n[head pose]\n" + render_head_pose_table(head_rows);
    for (const auto& e : evals) {
      PerCoefficientReport pc;
      for (const auto& r : e.json.at("per_coefficient")) {
        pc.rows.push_back(coefficient_row(r));
      }
      pc.average = coefficient_row(e.json.at("per_coefficient_average"));
      text += "\n[per-coefficient: " + e.json.at("method").get<std::string>() +
              "]\n" + render_per_coefficient_table(pc);
    }

    std::string jsonl = ordered_json{{"record", "header"}, {"header", header}}.dump() +
                        "\n";
    jsonl += main_table_jsonl(main_rows);
    jsonl += error_summary_jsonl(summary_rows);
    jsonl += ttest_jsonl(ttests);
    jsonl += head_pose_jsonl(head_rows);

    if (!o.text.empty()) write_file_atomic(o.text, text);
    if (!o.jsonl.empty()) write_file_atomic(o.jsonl, jsonl);
    if (o.text.empty() && o.jsonl.empty()) out << text;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed evaluation file: ") + e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"blendsem: blendshape semantics pipeline", "blendsem"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed recorded in every artifact")
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker count for service calls")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Calibrate and subsample sessions");
  c_ingest->add_option("--manifest", ingest.manifests, "Session manifest JSON")
      ->required();
  c_ingest->add_option("--target-fps", ingest.target_fps)->capture_default_str();
  c_ingest->add_option("--out", ingest.out, "Session store (JSONL)")->required();

  SplitOptions split;
  auto* c_split = app.add_subcommand("split", "Subject-disjoint train/val/test split");
  c_split->add_option("--store", split.store)->required();
  c_split->add_option("--assignment", split.assignment, "JSON subject -> split")
      ->required();
  c_split->add_option("--out-dir", split.out_dir)->required();

  TeachOptions teach;
  auto* c_teach = app.add_subcommand("teach", "Generate semantic descriptions");
  c_teach->add_option("--pairs", teach.pairs)->required();
  c_teach->add_option("--cache", teach.cache)->required();
  c_teach->add_option("--mode", teach.mode, "rule or service")->capture_default_str();
  c_teach->add_option("--endpoint", teach.endpoint);
  c_teach->add_option("--model", teach.model)->capture_default_str();
  c_teach->add_option("--max-tokens", teach.max_tokens)->capture_default_str();
  c_teach->add_option("--temperature", teach.temperature)->capture_default_str();

  EncodeOptions encode;
  auto* c_encode = app.add_subcommand("encode", "Assemble target sequences");
  c_encode->add_option("--pairs", encode.pairs)->required();
  c_encode->add_option("--cache", encode.cache)->required();
  c_encode->add_option("--out", encode.out)->required();

  PredictOptions pred;
  auto* c_predict = app.add_subcommand("predict", "Run a predictor over images");
  c_predict->add_option("--pairs", pred.pairs)->required();
  c_predict->add_option("--out", pred.out)->required();
  c_predict->add_option("--predictor", pred.predictor,
                        "neutral, noisy-oracle or service")
      ->capture_default_str();
  c_predict->add_option("--sigma", pred.sigma)->capture_default_str();
  c_predict->add_option("--mode", pred.mode, "strict or lenient");
  c_predict->add_option("--endpoint", pred.endpoint);
  c_predict->add_option("--model", pred.model)->capture_default_str();
  c_predict->add_option("--max-tokens", pred.max_tokens)->capture_default_str();
  c_predict->add_option("--temperature", pred.temperature)->capture_default_str();

  TrainEvalOptions te;
  auto* c_train = app.add_subcommand("train-eval", "Train the retrieval evaluator");
  c_train->add_option("--train-pairs", te.train_pairs)->required();
  c_train->add_option("--train-embeddings", te.train_embeddings)->required();
  c_train->add_option("--val-pairs", te.val_pairs)->required();
  c_train->add_option("--val-embeddings", te.val_embeddings)->required();
  c_train->add_option("--out", te.out, "Checkpoint path")->required();
  c_train->add_option("--curve", te.curve, "Training curve (JSONL)");
  c_train->add_option("--temperature", te.config.temperature)->capture_default_str();
  c_train->add_option("--lr", te.config.learning_rate)->capture_default_str();
  c_train->add_option("--weight-decay", te.config.weight_decay)->capture_default_str();
  c_train->add_option("--max-epochs", te.config.max_epochs)->capture_default_str();
  c_train->add_option("--epoch-limit", te.config.epoch_limit)->capture_default_str();
  c_train->add_option("--patience", te.config.patience)->capture_default_str();
  c_train->add_option("--batch-size", te.config.batch_size)->capture_default_str();
  c_train->add_option("--hidden-dim", te.config.hidden_dim)->capture_default_str();
  c_train->add_option("--output-dim", te.config.output_dim)->capture_default_str();

  EvaluateOptions ev;
  auto* c_eval = app.add_subcommand("evaluate", "Score predictions against ground truth");
  c_eval->add_option("--pairs", ev.pairs, "Ground-truth pairs")->required();
  c_eval->add_option("--predictions", ev.predictions);
  c_eval->add_flag("--gt-as-prediction", ev.gt_as_prediction,
                   "Score ground truth against itself");
  c_eval->add_option("--checkpoint", ev.checkpoint);
  c_eval->add_option("--embeddings", ev.embeddings, "Description embeddings");
  c_eval->add_option("--method", ev.method)->capture_default_str();
  c_eval->add_option("--threshold", ev.threshold)->capture_default_str();
  c_eval->add_option("--rp-k", ev.rp_k)->delimiter(',')->capture_default_str();
  c_eval->add_option("--batch-size", ev.batch_size)->capture_default_str();
  c_eval->add_option("--out", ev.out)->required();

  ReportOptions rep;
  auto* c_report = app.add_subcommand("report", "Render comparison tables");
  c_report->add_option("--eval", rep.evaluations, "Evaluation file")->required();
  c_report->add_option("--compare", rep.compare, "FIRST:SECOND paired t-test");
  c_report->add_option("--text", rep.text);
  c_report->add_option("--jsonl", rep.jsonl);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    const ordered_json base = {{"seed", g.seed}, {"jobs", g.jobs}};
    if (*c_ingest) {
      cmd_ingest(ingest, out);
    } else if (*c_split) {
      cmd_split(split, out);
    } else if (*c_teach) {
      cmd_teach(teach, g, out);
    } else if (*c_encode) {
      cmd_encode(encode, out);
    } else if (*c_predict) {
      cmd_predict(pred, g, out);
    } else if (*c_train) {
      cmd_train_eval(te, g, out);
    } else if (*c_eval) {
      ordered_json cfg = base;
      cfg["command"] = "evaluate";
      cfg["pairs"] = ev.pairs;
      cfg["predictions"] = ev.gt_as_prediction ? "<ground truth>" : ev.predictions;
      cfg["checkpoint"] = ev.checkpoint;
      cfg["embeddings"] = ev.embeddings;
      cfg["method"] = ev.method;
      cfg["threshold"] = ev.threshold;
      cfg["rp_k"] = ev.rp_k;
      cfg["batch_size"] = ev.batch_size;
      cmd_evaluate(ev, g, cfg, out);
    } else if (*c_report) {
      ordered_json cfg = base;
      cfg["command"] = "report";
      cfg["evaluations"] = rep.evaluations;
      cfg["compare"] = rep.compare;
      cmd_report(rep, cfg, out);
    }
  } catch (const Error& e) {
    err << "error (" << ToString(e.kind()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace blendsem
