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

#ifndef BLENDSEM_INFONCE_H_
#define BLENDSEM_INFONCE_H_

#include <Eigen/Dense>

namespace blendsem {

struct InfoNceResult {
  double loss = 0.0;
  Eigen::MatrixXd grad_image;   // dLoss/d image embeddings
  Eigen::MatrixXd grad_motion;  // dLoss/d motion embeddings
};

// Symmetric contrastive loss over S = image * motion^T / tau, averaging the
// row-wise and column-wise cross entropies against the diagonal.
// Throws ParameterError when N < 2, tau <= 0 or the shapes differ.
double infonce_loss(const Eigen::MatrixXd& image, const Eigen::MatrixXd& motion,
                    double tau);

InfoNceResult infonce_loss_and_grad(const Eigen::MatrixXd& image,
                                    const Eigen::MatrixXd& motion, double tau);

}  // namespace blendsem

#endif  // BLENDSEM_INFONCE_H_
