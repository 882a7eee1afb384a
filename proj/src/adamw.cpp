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

#include "blendsem/adamw.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blendsem/error.h"

namespace blendsem {

int AdamW::add(Eigen::Index rows, Eigen::Index cols) {
  m_.push_back(Eigen::MatrixXd::Zero(rows, cols));
  v_.push_back(Eigen::MatrixXd::Zero(rows, cols));
  return static_cast<int>(m_.size()) - 1;
}

void AdamW::update(int slot, Eigen::Ref<Eigen::MatrixXd> param,
                   const Eigen::MatrixXd& grad, double lr) {
  if (step_ == 0) throw ParameterError("AdamW::update before begin_step");
  auto& m = m_.at(static_cast<std::size_t>(slot));
  auto& v = v_.at(static_cast<std::size_t>(slot));
  if (param.rows() != m.rows() || param.cols() != m.cols() ||
      grad.rows() != m.rows() || grad.cols() != m.cols()) {
    throw StructuralError("AdamW slot shape mismatch");
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  m = b1 * m + (1.0 - b1) * grad;
  v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  param *= (1.0 - lr * config_.weight_decay);
  param.array() -= lr * (m.array() / c1) /
                   ((v.array() / c2).sqrt() + config_.epsilon);
}

double cosine_lr(double lr0, int epoch, int max_epochs) {
  if (max_epochs <= 0) throw ParameterError("max_epochs must be > 0");
  const int e = std::clamp(epoch, 0, max_epochs);
  return lr0 * 0.5 *
         (1.0 + std::cos(std::numbers::pi * static_cast<double>(e) /
                         static_cast<double>(max_epochs)));
}

}  // namespace blendsem
