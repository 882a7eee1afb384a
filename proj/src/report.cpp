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

#include "blendsem/report.h"

#include <algorithm>
#include <cmath>

#include "blendsem/error.h"
#include "blendsem/numeric_format.h"
#include "json.hpp"

namespace blendsem {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fixed_or_dash(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : kUndefinedCell;
}

std::string percent(double fraction) {
  return format_fixed(fraction * 100.0, 2) + "%";
}

std::string percent_or_dash(const std::optional<double>& v) {
  return v ? percent(*v) : kUndefinedCell;
}

std::string t_cell(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return format_fixed(t, 2);
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

template <typename Rows, typename Fn>
std::string jsonl(const Rows& rows, Fn&& to_json) {
  std::string out;
  for (const auto& r : rows) {
    out += to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  if (header.empty()) throw ParameterError("table needs at least one column");
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw StructuralError("table row has " + std::to_string(row.size()) +
                            " cells, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  auto line = [&width](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string pad(width[c] - cells[c].size(), ' ');
      if (c == 0) {
        out += cells[c];
        if (cells.size() > 1) out += pad;
      } else {
        out += "  " + pad + cells[c];
      }
    }
    return out + "\n";
  };
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  total += 2 * (width.size() - 1);
  std::string out = line(header);
  out += std::string(total, '-') + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

std::string render_main_table(std::span<const MainTableRow> rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> c{r.method, fixed_or_dash(r.mse, 4)};
    for (int k = 0; k < 3; ++k) {
      c.push_back(r.r_precision ? percent((*r.r_precision)[k]) : kUndefinedCell);
    }
    c.push_back(fixed_or_dash(r.mmd, 2));
    c.push_back(percent_or_dash(r.pearson));
    c.push_back(percent_or_dash(r.spearman));
    c.push_back(fixed_or_dash(r.accuracy, 4));
    c.push_back(fixed_or_dash(r.msd, 4));
    c.push_back(fixed_or_dash(r.deviation, 4));
    cells.push_back(std::move(c));
  }
  return render_table({"Method", "MSE", "top-1", "top-2", "top-3", "MMD",
                       "P-Cor", "S-Cor", "Acc.", "MSD", "Deviation"},
                      cells);
}

std::string render_error_summary_table(std::span<const ErrorSummaryRow> rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.method, format_fixed(r.summary.mean * 1e3, 2),
                     format_fixed(r.summary.median * 1e3, 2),
                     format_fixed(r.summary.std * 1e3, 2),
                     format_fixed(r.summary.p90 * 1e3, 2)});
  }
  return "values x 1e-3\n" +
         render_table({"Method", "Mean MSE", "Median MSE", "Std", "P90"}, cells);
}

std::string render_ttest_table(std::span<const TTestRow> rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.comparison, format_scientific(r.result.delta_mse, 2),
                     t_cell(r.result.t_statistic),
                     format_scientific(r.result.p_value, 2)});
  }
  return render_table({"Comparison", "Delta MSE", "t-statistic", "p-value"},
                      cells);
}

std::string render_per_coefficient_table(const PerCoefficientReport& report) {
  std::vector<std::vector<std::string>> cells;
  auto add = [&cells](const PerCoefficientRow& r) {
    cells.push_back({r.name, format_fixed(r.mse, 4), fixed_or_dash(r.pearson, 4),
                     fixed_or_dash(r.spearman, 4), format_fixed(r.deviation, 4)});
  };
  for (const auto& r : report.rows) add(r);
  add(report.average);
  return render_table({"", "MSE", "P Corr", "S Corr", "Deviation"}, cells);
}

std::vector<HeadPoseRow> head_pose_rows(std::span<const CoefficientFrame> pred,
                                        std::span<const CoefficientFrame> gt,
                                        const std::string& method) {
  const auto head = ActionRegistry::head_pose();
  const auto cc = cross_comparison(
      pred, gt, std::span<const ActionIndex>(head.data(), head.size()));
  std::vector<HeadPoseRow> rows;
  for (const auto& c : cc.per_coefficient) {
    rows.push_back({std::string(ActionRegistry::name(c.index)) + "(" + method + ")",
                    c.pearson, c.spearman, c.msd, c.deviation});
  }
  return rows;
}

std::string render_head_pose_table(std::span<const HeadPoseRow> rows) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.label, percent_or_dash(r.pearson),
                     percent_or_dash(r.spearman), format_fixed(r.msd, 4),
                     format_fixed(r.deviation, 4)});
  }
  return render_table({"Method", "P-Cor", "S-Cor", "MSD", "Deviation"}, cells);
}

std::string main_table_jsonl(std::span<const MainTableRow> rows) {
  return jsonl(rows, [](const MainTableRow& r) {
    ordered_json rp = nullptr;
    if (r.r_precision) {
      rp = {(*r.r_precision)[0], (*r.r_precision)[1], (*r.r_precision)[2]};
    }
    return ordered_json{{"table", "main"},       {"method", r.method},
                        {"mse", opt(r.mse)},     {"r_precision", rp},
                        {"mmd", opt(r.mmd)},     {"pearson", opt(r.pearson)},
                        {"spearman", opt(r.spearman)},
                        {"accuracy", opt(r.accuracy)},
                        {"msd", opt(r.msd)},     {"deviation", opt(r.deviation)}};
  });
}

std::string error_summary_jsonl(std::span<const ErrorSummaryRow> rows) {
  return jsonl(rows, [](const ErrorSummaryRow& r) {
    return ordered_json{{"table", "error_summary"}, {"method", r.method},
                        {"mean", r.summary.mean},   {"median", r.summary.median},
                        {"std", r.summary.std},     {"p90", r.summary.p90}};
  });
}

std::string ttest_jsonl(std::span<const TTestRow> rows) {
  return jsonl(rows, [](const TTestRow& r) {
    return ordered_json{{"table", "ttest"},
                        {"comparison", r.comparison},
                        {"delta_mse", r.result.delta_mse},
                        {"t", finite_or_null(r.result.t_statistic)},
                        {"p", r.result.p_value},
                        {"n", r.result.n},
                        {"degenerate", r.result.degenerate}};
  });
}

std::string per_coefficient_jsonl(const PerCoefficientReport& report) {
  auto row = [](const PerCoefficientRow& r) {
    return ordered_json{{"table", "per_coefficient"}, {"name", r.name},
                        {"mse", r.mse},               {"pearson", opt(r.pearson)},
                        {"spearman", opt(r.spearman)},
                        {"deviation", r.deviation}};
  };
  std::string out = jsonl(report.rows, row);
  out += row(report.average).dump() + "\n";
  return out;
}

std::string head_pose_jsonl(std::span<const HeadPoseRow> rows) {
  return jsonl(rows, [](const HeadPoseRow& r) {
    return ordered_json{{"table", "head_pose"},   {"label", r.label},
                        {"pearson", opt(r.pearson)},
                        {"spearman", opt(r.spearman)},
                        {"msd", r.msd},           {"deviation", r.deviation}};
  });
}

}  // namespace blendsem
