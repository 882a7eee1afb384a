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

#ifndef BLENDSEM_METRICS_H_
#define BLENDSEM_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blendsem/frame.h"

namespace blendsem {

// Mean over samples of the per-sample mean squared error across all 61
// channels. Throws StructuralError when the lengths differ.
double mse(std::span<const CoefficientFrame> pred,
           std::span<const CoefficientFrame> gt);
std::vector<double> per_sample_mse(std::span<const CoefficientFrame> pred,
                                   std::span<const CoefficientFrame> gt);

// 1-based rank of S_ii within row i: larger similarity ranks first and ties
// go to the lower column index.
std::vector<int> diagonal_ranks(const Eigen::MatrixXd& sim);

// Fraction of rows whose matched column ranks within the top k.
// Requires a square matrix and 1 <= k < N.
double r_precision(const Eigen::MatrixXd& sim, int k);

// Mean Euclidean distance between matched rows.
double mmd(const Eigen::MatrixXd& image, const Eigen::MatrixXd& motion);

struct RetrievalProtocol {
  int batch_size = 32;
  std::uint64_t seed = 42;
  std::vector<int> ks = {1, 2, 3};
};

struct RetrievalResult {
  std::vector<int> ks;
  std::vector<double> r_precision;  // parallel to ks
  double mmd = 0.0;                 // over every pair, not just full batches
  std::size_t batches = 0;
  std::size_t ranked_samples = 0;
};

// Shuffles pair indices with the protocol seed, cuts full batches and drops
// the remainder, then averages the per-row top-k hits over all batches.
// Throws ParameterError when no full batch fits or a k is out of range.
RetrievalResult evaluate_retrieval(const Eigen::MatrixXd& image,
                                   const Eigen::MatrixXd& motion,
                                   const RetrievalProtocol& protocol);

// Both return nullopt when either side has zero variance. Lengths must match
// (StructuralError) and be at least 2 (ParameterError).
std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y);
std::optional<double> spearman(std::span<const double> x,
                               std::span<const double> y);

// 1-based ranks, ties replaced by their mean rank.
std::vector<double> average_ranks(std::span<const double> x);

struct CoefficientComparison {
  ActionIndex index = 0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  double accuracy = 0.0;
  double msd = 0.0;
  double deviation = 0.0;
};

struct CrossComparisonReport {
  std::vector<ActionIndex> subset;
  double threshold = 0.1;
  std::vector<CoefficientComparison> per_coefficient;
  std::optional<double> pearson;   // mean over defined coefficients
  std::optional<double> spearman;  // mean over defined coefficients
  double accuracy = 0.0;           // fraction of agreeing cells
  double msd = 0.0;
  double deviation = 0.0;
};

inline constexpr double kDefaultAccuracyThreshold = 0.1;

CrossComparisonReport cross_comparison(
    std::span<const CoefficientFrame> pred, std::span<const CoefficientFrame> gt,
    std::span<const ActionIndex> subset,
    double threshold = kDefaultAccuracyThreshold);

// Over the dominant-13 subset.
CrossComparisonReport cross_comparison(
    std::span<const CoefficientFrame> pred, std::span<const CoefficientFrame> gt,
    double threshold = kDefaultAccuracyThreshold);

struct PerCoefficientRow {
  std::string name;
  double mse = 0.0;
  std::optional<double> pearson;
  std::optional<double> spearman;
  double deviation = 0.0;
};

struct PerCoefficientReport {
  std::vector<PerCoefficientRow> rows;  // ascending MSE, registry order on ties
  PerCoefficientRow average;            // means over defined cells
};

PerCoefficientReport per_coefficient_report(
    std::span<const CoefficientFrame> pred, std::span<const CoefficientFrame> gt);

struct ErrorSummary {
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;  // population
  double p90 = 0.0;
};

// Linear interpolation between order statistics at position q * (n - 1).
double percentile(std::span<const double> values, double q);

ErrorSummary error_summary(std::span<const double> values);

}  // namespace blendsem

#endif  // BLENDSEM_METRICS_H_
