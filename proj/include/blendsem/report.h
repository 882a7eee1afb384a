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

#ifndef BLENDSEM_REPORT_H_
#define BLENDSEM_REPORT_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blendsem/metrics.h"
#include "blendsem/stats.h"

namespace blendsem {

// Plain-text table: first column left-aligned, the rest right-aligned, two
// spaces between columns and a dashed rule under the header.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

// Missing values render as "-".
inline constexpr const char* kUndefinedCell = "-";

// Headline comparison: error, retrieval and cross-comparison columns.
// Fractions (R-Precision, correlations) are stored in [0, 1] and printed as
// percentages.
struct MainTableRow {
  std::string method;
  std::optional<double> mse;
  std::optional<std::array<double, 3>> r_precision;  // top-1, top-2, top-3
  std::optional<double> mmd;
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::optional<double> accuracy;
  std::optional<double> msd;
  std::optional<double> deviation;
};
std::string render_main_table(std::span<const MainTableRow> rows);

// Per-sample MSE statistics, printed in units of 1e-3.
struct ErrorSummaryRow {
  std::string method;
  ErrorSummary summary;
};
std::string render_error_summary_table(std::span<const ErrorSummaryRow> rows);

struct TTestRow {
  std::string comparison;  // "A1 vs A0": delta is first minus second
  TTestResult result;
};
std::string render_ttest_table(std::span<const TTestRow> rows);

std::string render_per_coefficient_table(const PerCoefficientReport& report);

struct HeadPoseRow {
  std::string label;  // e.g. "HeadYaw(Ours)"
  std::optional<double> pearson;
  std::optional<double> spearman;
  double msd = 0.0;
  double deviation = 0.0;
};
// One row per head rotation channel (yaw, pitch, roll), labelled
// "<channel>(<method>)".
std::vector<HeadPoseRow> head_pose_rows(std::span<const CoefficientFrame> pred,
                                        std::span<const CoefficientFrame> gt,
                                        const std::string& method);
std::string render_head_pose_table(std::span<const HeadPoseRow> rows);

// Machine-readable counterparts, one JSON object per line. Undefined values
// are written as null.
std::string main_table_jsonl(std::span<const MainTableRow> rows);
std::string error_summary_jsonl(std::span<const ErrorSummaryRow> rows);
std::string ttest_jsonl(std::span<const TTestRow> rows);
std::string per_coefficient_jsonl(const PerCoefficientReport& report);
std::string head_pose_jsonl(std::span<const HeadPoseRow> rows);

}  // namespace blendsem

#endif  // BLENDSEM_REPORT_H_
