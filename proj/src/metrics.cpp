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

#include "blendsem/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "blendsem/error.h"

namespace blendsem {
namespace {

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw StructuralError(std::string(what) + ": length mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void check_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw ParameterError(std::string(what) + ": empty input");
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

template <typename T>
std::optional<double> mean_defined(const std::vector<T>& rows,
                                   std::optional<double> T::*field) {
  double s = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.*field) {
      s += *(r.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return s / n;
}

std::vector<double> column(std::span<const CoefficientFrame> frames,
                           ActionIndex k) {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f[k]);
  return out;
}

}  // namespace

std::vector<double> per_sample_mse(std::span<const CoefficientFrame> pred,
                                   std::span<const CoefficientFrame> gt) {
  check_aligned(pred.size(), gt.size(), "mse");
  std::vector<double> out;
  out.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double s = 0.0;
    for (ActionIndex k = 0; k < kActionCount; ++k) {
      const double d = pred[i][k] - gt[i][k];
      s += d * d;
    }
    out.push_back(s / kActionCount);
  }
  return out;
}

double mse(std::span<const CoefficientFrame> pred,
           std::span<const CoefficientFrame> gt) {
  const auto per = per_sample_mse(pred, gt);
  check_nonempty(per.size(), "mse");
  return mean_of(per);
}

std::vector<int> diagonal_ranks(const Eigen::MatrixXd& sim) {
  if (sim.rows() != sim.cols()) {
    throw StructuralError("similarity matrix must be square");
  }
  if (!sim.allFinite()) throw ValidationError("similarity matrix not finite");
  const Eigen::Index n = sim.rows();
  std::vector<int> ranks(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = sim(i, i);
    int rank = 1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (sim(i, j) > d || (j < i && sim(i, j) == d)) ++rank;
    }
    ranks[static_cast<std::size_t>(i)] = rank;
  }
  return ranks;
}

double r_precision(const Eigen::MatrixXd& sim, int k) {
  const auto n = sim.rows();
  if (k < 1 || k >= n) {
    throw ParameterError("R-Precision K must satisfy 1 <= K < N (K=" +
                         std::to_string(k) + ", N=" + std::to_string(n) + ")");
  }
  const auto ranks = diagonal_ranks(sim);
  const auto hits = std::count_if(ranks.begin(), ranks.end(),
                                  [k](int r) { return r <= k; });
  return static_cast<double>(hits) / static_cast<double>(n);
}

double mmd(const Eigen::MatrixXd& image, const Eigen::MatrixXd& motion) {
  if (image.rows() != motion.rows() || image.cols() != motion.cols()) {
    throw StructuralError("mmd: embedding sets differ in shape");
  }
  check_nonempty(static_cast<std::size_t>(image.rows()), "mmd");
  return (image - motion).rowwise().norm().mean();
}

RetrievalResult evaluate_retrieval(const Eigen::MatrixXd& image,
                                   const Eigen::MatrixXd& motion,
                                   const RetrievalProtocol& protocol) {
  if (image.rows() != motion.rows() || image.cols() != motion.cols()) {
    throw StructuralError("retrieval: embedding sets differ in shape");
  }
  const int b = protocol.batch_size;
  if (b < 2) throw ParameterError("retrieval batch size must be >= 2");
  for (int k : protocol.ks) {
    if (k < 1 || k >= b) {
      throw ParameterError("R-Precision K must satisfy 1 <= K < batch size");
    }
  }
  const auto n = static_cast<std::size_t>(image.rows());
  const std::size_t batches = n / static_cast<std::size_t>(b);
  if (batches == 0) {
    throw ParameterError("retrieval needs at least one full batch of " +
                         std::to_string(b) + " pairs, got " + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(protocol.seed);
  std::shuffle(order.begin(), order.end(), rng);

  RetrievalResult r;
  r.ks = protocol.ks;
  r.r_precision.assign(protocol.ks.size(), 0.0);
  r.batches = batches;
  r.ranked_samples = batches * static_cast<std::size_t>(b);
  std::vector<std::size_t> hits(protocol.ks.size(), 0);
  Eigen::MatrixXd bi(b, image.cols()), bm(b, motion.cols());
  for (std::size_t t = 0; t < batches; ++t) {
    for (int j = 0; j < b; ++j) {
      const auto src = static_cast<Eigen::Index>(order[t * b + j]);
      bi.row(j) = image.row(src);
      bm.row(j) = motion.row(src);
    }
    const auto ranks = diagonal_ranks(bi * bm.transpose());
    for (std::size_t q = 0; q < protocol.ks.size(); ++q) {
      for (int rank : ranks) hits[q] += rank <= protocol.ks[q] ? 1 : 0;
    }
  }
  for (std::size_t q = 0; q < hits.size(); ++q) {
    r.r_precision[q] =
        static_cast<double>(hits[q]) / static_cast<double>(r.ranked_samples);
  }
  r.mmd = mmd(image, motion);
  return r;
}

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  check_aligned(x.size(), y.size(), "pearson");
  if (x.size() < 2) throw ParameterError("correlation needs at least 2 samples");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i + 1;
    while (j < idx.size() && x[idx[j]] == x[idx[i]]) ++j;
    // Positions i..j-1 share the mean of ranks i+1..j.
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = r;
    i = j;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y) {
  check_aligned(x.size(), y.size(), "spearman");
  if (x.size() < 2) throw ParameterError("correlation needs at least 2 samples");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

CrossComparisonReport cross_comparison(std::span<const CoefficientFrame> pred,
                                       std::span<const CoefficientFrame> gt,
                                       std::span<const ActionIndex> subset,
                                       double threshold) {
  check_aligned(pred.size(), gt.size(), "cross_comparison");
  check_nonempty(pred.size(), "cross_comparison");
  if (subset.empty()) throw ParameterError("cross_comparison: empty subset");
  if (!std::isfinite(threshold)) throw ParameterError("threshold not finite");
  const double n = static_cast<double>(pred.size());

  CrossComparisonReport r;
  r.subset.assign(subset.begin(), subset.end());
  r.threshold = threshold;
  double agree = 0.0, sq = 0.0, ab = 0.0;
  for (ActionIndex k : subset) {
    const auto p = column(pred, k);
    const auto g = column(gt, k);
    CoefficientComparison c;
    c.index = k;
    if (p.size() >= 2) {
      c.pearson = pearson(p, g);
      c.spearman = spearman(p, g);
    }
    double a = 0.0, s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      a += ((p[i] > threshold) == (g[i] > threshold)) ? 1.0 : 0.0;
      s += (p[i] - g[i]) * (p[i] - g[i]);
      d += std::abs(p[i] - g[i]);
    }
    c.accuracy = a / n;
    c.msd = s / n;
    c.deviation = d / n;
    agree += a;
    sq += s;
    ab += d;
    r.per_coefficient.push_back(c);
  }
  const double cells = n * static_cast<double>(subset.size());
  r.accuracy = agree / cells;
  r.msd = sq / cells;
  r.deviation = ab / cells;
  r.pearson = mean_defined(r.per_coefficient, &CoefficientComparison::pearson);
  r.spearman = mean_defined(r.per_coefficient, &CoefficientComparison::spearman);
  return r;
}

CrossComparisonReport cross_comparison(std::span<const CoefficientFrame> pred,
                                       std::span<const CoefficientFrame> gt,
                                       double threshold) {
  const auto sub = ActionRegistry::dominant13();
  return cross_comparison(pred, gt,
                          std::span<const ActionIndex>(sub.data(), sub.size()),
                          threshold);
}

PerCoefficientReport per_coefficient_report(
    std::span<const CoefficientFrame> pred, std::span<const CoefficientFrame> gt) {
  check_aligned(pred.size(), gt.size(), "per_coefficient_report");
  check_nonempty(pred.size(), "per_coefficient_report");
  const double n = static_cast<double>(pred.size());
  PerCoefficientReport r;
  for (ActionIndex k = 0; k < kActionCount; ++k) {
    const auto p = column(pred, k);
    const auto g = column(gt, k);
    PerCoefficientRow row;
    row.name = std::string(ActionRegistry::name(k));
    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      s += (p[i] - g[i]) * (p[i] - g[i]);
      d += std::abs(p[i] - g[i]);
    }
    row.mse = s / n;
    row.deviation = d / n;
    if (p.size() >= 2) {
      row.pearson = pearson(p, g);
      row.spearman = spearman(p, g);
    }
    r.rows.push_back(std::move(row));
  }
  std::stable_sort(r.rows.begin(), r.rows.end(),
                   [](const PerCoefficientRow& a, const PerCoefficientRow& b) {
                     return a.mse < b.mse;
                   });
  r.average.name = "Average";
  for (const auto& row : r.rows) {
    r.average.mse += row.mse;
    r.average.deviation += row.deviation;
  }
  r.average.mse /= kActionCount;
  r.average.deviation /= kActionCount;
  r.average.pearson = mean_defined(r.rows, &PerCoefficientRow::pearson);
  r.average.spearman = mean_defined(r.rows, &PerCoefficientRow::spearman);
  return r;
}

double percentile(std::span<const double> values, double q) {
  check_nonempty(values.size(), "percentile");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("percentile q must be in [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

ErrorSummary error_summary(std::span<const double> values) {
  check_nonempty(values.size(), "error_summary");
  for (double x : values) {
    if (!std::isfinite(x)) throw ValidationError("error_summary: non-finite value");
  }
  ErrorSummary s;
  s.mean = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  s.median = percentile(values, 0.5);
  s.p90 = percentile(values, 0.9);
  return s;
}

}  // namespace blendsem
