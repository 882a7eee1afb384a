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

#include "blendsem/zscore.h"

#include "blendsem/error.h"

namespace blendsem {

ZScoreStats zscore_fit(const Eigen::MatrixXd& samples) {
  if (samples.rows() == 0 || samples.cols() == 0) {
    throw ParameterError("z-score statistics need at least one sample");
  }
  ZScoreStats s;
  s.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - s.mean.transpose();
  s.std = (centered.array().square().colwise().sum() /
           static_cast<double>(samples.rows()))
              .sqrt()
              .transpose()
              .cwiseMax(kStdFloor);
  return s;
}

Eigen::VectorXd zscore_apply(const ZScoreStats& stats, const Eigen::VectorXd& v) {
  if (v.size() != stats.mean.size()) {
    throw StructuralError("z-score dimension mismatch: " +
                          std::to_string(v.size()) + " vs " +
                          std::to_string(stats.mean.size()));
  }
  return ((v - stats.mean).array() / stats.std.array()).matrix();
}

Eigen::MatrixXd zscore_apply(const ZScoreStats& stats,
                             const Eigen::MatrixXd& rows) {
  if (rows.cols() != stats.mean.size()) {
    throw StructuralError("z-score dimension mismatch: " +
                          std::to_string(rows.cols()) + " vs " +
                          std::to_string(stats.mean.size()));
  }
  Eigen::MatrixXd out = rows.rowwise() - stats.mean.transpose();
  out.array().rowwise() /= stats.std.transpose().array();
  return out;
}

}  // namespace blendsem
