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

// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blendsem/encoder.h"
#include "blendsem/frame.h"
#include "blendsem/infonce.h"
#include "blendsem/metrics.h"
#include "blendsem/numeric_format.h"
#include "blendsem/predictor.h"
#include "blendsem/report.h"
#include "blendsem/stats.h"
#include "blendsem/target_codec.h"
#include "blendsem/teacher.h"
#include "blendsem/trainer.h"
#include "support/gradcheck.h"
#include "support/pipeline.h"
#include "support/reference.h"
#include "support/report_fixtures.h"
#include "support/synthetic.h"
#include "support/test_util.h"
#include "support/ttest_cases.h"

namespace blendsem {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Tracks the worst absolute disagreement, counting a defined/undefined
// mismatch as infinite.
struct Worst {
  double value = 0.0;
  void add(double a, double b) { value = std::max(value, std::fabs(a - b)); }
  void add(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) {
      value = INFINITY;
    } else if (a) {
      add(*a, *b);
    }
  }
};

Outcome metric_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2026);
  Worst w;
  const int instances = 100;
  std::vector<std::size_t> dom;
  for (auto i : ActionRegistry::dominant13()) dom.push_back(i);
  for (int t = 0; t < instances; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 64)(rng);
    // Every fourth instance is coarsely rounded to force rank ties.
    const bool coarse = t % 4 == 0;
    std::vector<CoefficientFrame> gt, pred;
    for (int i = 0; i < n; ++i) {
      auto g = testing::random_frame(rng).values();
      auto p = testing::random_frame(rng).values();
      if (coarse) {
        for (auto& x : g) x = std::round(x * 4) / 4;
        for (auto& x : p) x = std::round(x * 4) / 4;
      }
      gt.emplace_back(g);
      pred.emplace_back(p);
    }
    w.add(mse(pred, gt), testing::ref_mse(pred, gt));
    for (ActionIndex k = 0; k < kActionCount; ++k) {
      std::vector<double> x, y;
      for (int i = 0; i < n; ++i) {
        x.push_back(pred[i][k]);
        y.push_back(gt[i][k]);
      }
      w.add(pearson(x, y), testing::ref_pearson(x, y));
      w.add(spearman(x, y), testing::ref_spearman(x, y));
    }
    const auto cc = cross_comparison(pred, gt);
    const auto rc = testing::ref_cross_comparison(pred, gt, dom, kDefaultAccuracyThreshold);
    w.add(cc.pearson, rc.pearson);
    w.add(cc.spearman, rc.spearman);
    w.add(cc.accuracy, rc.accuracy);
    w.add(cc.msd, rc.msd);
    w.add(cc.deviation, rc.deviation);

    const auto errors = per_sample_mse(pred, gt);
    const auto es = error_summary(errors);
    const auto rs = testing::ref_error_summary(errors);
    w.add(es.mean, rs.mean);
    w.add(es.median, rs.median);
    w.add(es.std, rs.std);
    w.add(es.p90, rs.p90);

    const auto a = testing::random_unit_rows(rng, n, 61);
    const auto b = testing::random_unit_rows(rng, n, 61);
    w.add(mmd(a, b), testing::ref_mmd(a, b));
    Eigen::MatrixXd sim = a * b.transpose();
    if (coarse) sim = (sim.array() * 4).round() / 4;
    for (int k = 1; k < std::min(n, 6); ++k) {
      w.add(r_precision(sim, k), testing::ref_r_precision(sim, k));
    }
  }
  const double secs = seconds_since(start);
  return {w.value <= 1e-10 && secs < 60.0,
          std::to_string(instances) + " instances, max |diff| " + num(w.value) +
              ", " + num(secs) + " s"};
}

SemanticDescription random_description(std::mt19937_64& rng,
                                       const ActionValueSet& s) {
  auto d = rule_based_description(s);
  static const std::vector<std::string> kTexts = {
      "smirk", "quote \" and \\ backslash", "tab\tand newline\n", "café",
      "brows \"raised\""};
  std::uniform_int_distribution<std::size_t> pick(0, kTexts.size() - 1);
  if (rng() % 2) d.expression_type = kTexts[pick(rng)];
  if (rng() % 3 == 0) d.emotion_cue = kTexts[pick(rng)];
  if (rng() % 3 == 0) d.symmetry_pattern = kTexts[pick(rng)];
  return d;
}

Outcome codec_round_trip() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31);
  int failures = 0;
  const int cases = 1000;
  for (int t = 0; t < cases; ++t) {
    const ActionValueSet s{testing::random_frame(rng)};
    const auto d = random_description(rng, s);
    const auto parsed = parse_prediction(encode_target(d, s).raw_text, ParseMode::kStrict);
    bool ok = parsed.repairs.empty() && parsed.analysis == d;
    for (ActionIndex i = 0; i < kActionCount; ++i) {
      ok = ok && std::fabs(parsed.arkit[i] - round_half_away(s[i], 3)) < 1e-12;
    }
    failures += ok ? 0 : 1;
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 10.0,
          std::to_string(cases - failures) + "/" + std::to_string(cases) +
              " identical, " + num(secs) + " s"};
}

Outcome calibration() {
  std::mt19937_64 rng(17);
  int self_zero = 0, in_range = 0;
  const int cases = 1000;
  for (int t = 0; t < cases; ++t) {
    const auto f = testing::random_raw_frame(rng);
    const auto z = calibrate(f, f);
    bool zero = true;
    for (double v : z.values()) zero = zero && v == 0.0;
    self_zero += zero;
    in_range += calibrate(f, testing::random_raw_frame(rng)).in_calibrated_range();
  }
  return {self_zero == cases && in_range == cases,
          "calibrate(f, f) = 0 for " + std::to_string(self_zero) + "/" +
              std::to_string(cases) + ", in range " + std::to_string(in_range) +
              "/" + std::to_string(cases)};
}

Outcome infonce_checks() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  const int instances = 100;
  const double tau = 0.07;
  for (int t = 0; t < instances; ++t) {
    const auto a = testing::random_unit_rows(rng, 8, 16);
    const auto b = testing::random_unit_rows(rng, 8, 16);
    const auto r = infonce_loss_and_grad(a, b, tau);
    const auto ga = testing::numeric_gradient(
        [&](const Eigen::MatrixXd& x) { return infonce_loss(x, b, tau); }, a, 1e-5);
    const auto gb = testing::numeric_gradient(
        [&](const Eigen::MatrixXd& x) { return infonce_loss(a, x, tau); }, b, 1e-5);
    worst = std::max({worst, testing::relative_error(r.grad_image, ga),
                      testing::relative_error(r.grad_motion, gb)});
  }
  double uniform_gap = 0.0;
  for (int n : {2, 8, 32, 256}) {
    Eigen::MatrixXd same = Eigen::MatrixXd::Zero(n, 16);
    same.col(0).setOnes();
    uniform_gap = std::max(uniform_gap,
                           std::fabs(infonce_loss(same, same, tau) - std::log(n)));
  }
  return {worst < 1e-4 && uniform_gap <= 1e-9,
          std::to_string(instances) + " instances, max rel err " + num(worst) +
              ", |loss - ln N| " + num(uniform_gap)};
}

Outcome evaluator_sanity() {
  const auto start = Clock::now();
  testing::SeparableGenerator gen(2024);
  const auto train = gen.draw(2048);
  const auto val = gen.draw(512);
  TrainConfig cfg;  // defaults
  cfg.epoch_limit = 200;
  const auto fit = fit_evaluator(train, val, cfg);
  const double secs = seconds_since(start);

  const auto broken = fit_evaluator(testing::shuffle_motion(train, 1),
                                    testing::shuffle_motion(val, 2), cfg);
  return {fit.best_val_r_precision1 >= 0.95 && secs < 300.0 &&
              broken.best_val_r_precision1 < 0.10,
          "R@1 " + format_fixed(100 * fit.best_val_r_precision1, 2) + "% at epoch " +
              std::to_string(fit.best_epoch) + " in " + num(secs) +
              " s; shuffled R@1 " +
              format_fixed(100 * broken.best_val_r_precision1, 2) + "%"};
}

double oracle_mse(const std::vector<CoefficientFrame>& frames, double sigma) {
  std::map<std::string, ActionValueSet> gt;
  std::vector<std::string> refs;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    refs.push_back("img_" + std::to_string(i));
    gt.emplace(refs.back(), ActionValueSet{frames[i]});
  }
  auto p = stub_noisy_oracle(gt, sigma, 5);
  std::vector<CoefficientFrame> pred;
  for (const auto& ref : refs) pred.push_back(predict(ref, *p).parsed->arkit.frame());
  return mse(pred, frames);
}

Outcome noise_law() {
  std::mt19937_64 rng(55);
  std::vector<CoefficientFrame> frames;
  for (int i = 0; i < 1000; ++i) frames.push_back(testing::random_mid_frame(rng));
  bool ok = true;
  std::string detail;
  for (double sigma : {0.02, 0.05}) {
    const double m = oracle_mse(frames, sigma);
    const double rel = std::fabs(m / (sigma * sigma) - 1.0);
    ok = ok && rel <= 0.10;
    detail += "sigma " + num(sigma) + ": MSE " + num(m) + " (" +
              format_fixed(100 * rel, 2) + "% off); ";
  }
  const double floor = oracle_mse(frames, 0.0);
  ok = ok && floor <= 7e-8;
  detail += "sigma 0: MSE " + num(floor) + " (bound 7e-08)";
  return {ok, detail};
}

Outcome ttest() {
  // Paired-sample cases check t and p; tail cases check p from (t, df).
  const auto& paired = testing::paired_cases();
  const auto& tails = testing::tail_cases();
  auto p_close = [](double got, double want) {
    return want == 0.0 ? got == 0.0 : std::fabs(got - want) <= 1e-8 * want;
  };
  int matched = 0;
  for (const auto& c : paired) {
    const auto r = paired_ttest(c.a, c.b);
    const bool t_ok = std::isinf(c.t) ? r.t_statistic == c.t
                                      : std::fabs(r.t_statistic - c.t) <= 1e-6;
    matched += t_ok && p_close(r.p_value, c.p);
  }
  for (const auto& c : tails) matched += p_close(student_t_two_sided(c.t, c.df), c.p);
  const int cases = static_cast<int>(paired.size() + tails.size());

  const std::vector<double> same = {0.1, 0.2, 0.3};
  const auto z = paired_ttest(same, same);
  const bool zero_ok = z.t_statistic == 0.0 && z.p_value == 1.0 && !z.degenerate;
  return {cases >= 20 && matched == cases && zero_ok,
          std::to_string(matched) + "/" + std::to_string(cases) +
              " cases matched; a = b gives t " + num(z.t_statistic) + ", p " +
              num(z.p_value)};
}

Outcome report_fidelity() {
  const std::filesystem::path golden(BLENDSEM_GOLDEN_DIR);
  auto render_all = [] {
    return std::vector<std::pair<std::string, std::string>>{
        {"main_table.txt", render_main_table(testing::main_table_fixture())},
        {"error_summary.txt",
         render_error_summary_table(testing::error_summary_fixture())},
        {"ttest_table.txt", render_ttest_table(testing::ttest_fixture())},
        {"head_pose.txt", render_head_pose_table(testing::head_pose_fixture())},
        {"per_coefficient.txt",
         render_per_coefficient_table(testing::per_coefficient_fixture())}};
  };
  const auto first = render_all();
  const auto second = render_all();
  int matched = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto expected = testing::slurp(golden / first[i].first);
    matched += !expected.empty() && first[i].second == expected &&
               first[i].second == second[i].second;
  }
  const bool dash = first[4].second.find("TongueOut") != std::string::npos &&
                    first[4].second.find(" - ") != std::string::npos;
  return {matched == static_cast<int>(first.size()) && dash,
          std::to_string(matched) + "/" + std::to_string(first.size()) +
              " tables byte-equal to golden"};
}

Outcome determinism() {
  testing::TempDir dir;
  const auto corpus = testing::write_corpus(dir.path() / "corpus");
  const auto root = dir.path() / "run";
  const auto a_run = testing::run_pipeline(corpus, root);
  if (a_run.code != 0) return {false, "pipeline failed: " + a_run.err};
  const auto a = testing::snapshot(root);
  std::filesystem::remove_all(root);
  const auto b_run = testing::run_pipeline(corpus, root);
  if (b_run.code != 0) return {false, "pipeline failed: " + b_run.err};
  const auto b = testing::snapshot(root);
  int same = 0;
  for (const auto& [name, bytes] : a) {
    const auto it = b.find(name);
    same += it != b.end() && it->second == bytes;
  }
  return {a.size() == b.size() && same == static_cast<int>(a.size()),
          std::to_string(same) + "/" + std::to_string(a.size()) +
              " files byte-identical across reruns"};
}

}  // namespace
}  // namespace blendsem

int main() {
  using blendsem::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"metric oracle equivalence", blendsem::metric_oracle},
      {"codec round-trip", blendsem::codec_round_trip},
      {"calibration correctness", blendsem::calibration},
      {"InfoNCE gradient check", blendsem::infonce_checks},
      {"retrieval-evaluator sanity", blendsem::evaluator_sanity},
      {"end-to-end noise law", blendsem::noise_law},
      {"paired t-test", blendsem::ttest},
      {"report fidelity", blendsem::report_fidelity},
      {"determinism", blendsem::determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
