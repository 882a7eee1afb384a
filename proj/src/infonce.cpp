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

#include "blendsem/infonce.h"

#include <cmath>

#include "blendsem/error.h"

namespace blendsem {
namespace {

void check(const Eigen::MatrixXd& image, const Eigen::MatrixXd& motion,
           double tau) {
  if (image.rows() < 2) throw ParameterError("InfoNCE needs at least 2 pairs");
  if (image.rows() != motion.rows() || image.cols() != motion.cols()) {
    throw ParameterError("InfoNCE image and motion batches differ in shape");
  }
  if (!(tau > 0.0)) throw ParameterError("temperature must be > 0");
}

// Row-wise softmax of m and the mean of -log p_ii.
double softmax_rows(const Eigen::MatrixXd& m, Eigen::MatrixXd* p) {
  const Eigen::Index n = m.rows();
  *p = Eigen::MatrixXd(n, m.cols());
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = m.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (m.row(i).array() - mx).exp().matrix();
    const double s = e.sum();
    p->row(i) = e / s;
    total += mx + std::log(s) - m(i, i);
  }
  return total / static_cast<double>(n);
}

}  // namespace

double infonce_loss(const Eigen::MatrixXd& image, const Eigen::MatrixXd& motion,
                    double tau) {
  return infonce_loss_and_grad(image, motion, tau).loss;
}

InfoNceResult infonce_loss_and_grad(const Eigen::MatrixXd& image,
                                    const Eigen::MatrixXd& motion, double tau) {
  check(image, motion, tau);
  const Eigen::Index n = image.rows();
  const Eigen::MatrixXd logits = image * motion.transpose() / tau;
  Eigen::MatrixXd p_row, p_col;
  const double l_row = softmax_rows(logits, &p_row);
  const double l_col = softmax_rows(logits.transpose(), &p_col);

  InfoNceResult r;
  r.loss = 0.5 * (l_row + l_col);
  // dL/dlogits = (P_row - I + (P_col - I)^T) / (2N)
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd g =
      ((p_row - eye) + (p_col - eye).transpose()) * (0.5 / static_cast<double>(n));
  r.grad_image = g * motion / tau;
  r.grad_motion = g.transpose() * image / tau;
  return r;
}

}  // namespace blendsem
