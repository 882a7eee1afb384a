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

#ifndef BLENDSEM_ZSCORE_H_
#define BLENDSEM_ZSCORE_H_

#include <Eigen/Dense>

namespace blendsem {

inline constexpr double kStdFloor = 1e-8;

// Per-dimension standardization statistics of the training split.
// std is the population standard deviation, floored at kStdFloor.
struct ZScoreStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

// Rows are samples. Throws ParameterError on an empty matrix.
ZScoreStats zscore_fit(const Eigen::MatrixXd& samples);

Eigen::VectorXd zscore_apply(const ZScoreStats& stats, const Eigen::VectorXd& v);
Eigen::MatrixXd zscore_apply(const ZScoreStats& stats, const Eigen::MatrixXd& rows);

}  // namespace blendsem

#endif  // BLENDSEM_ZSCORE_H_
