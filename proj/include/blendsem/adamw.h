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

#ifndef BLENDSEM_ADAMW_H_
#define BLENDSEM_ADAMW_H_

#include <vector>

#include <Eigen/Dense>

namespace blendsem {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-4;
};

// Adaptive-moment update with weight decay applied directly to the weights.
class AdamW {
 public:
  explicit AdamW(AdamWConfig config = {}) : config_(config) {}

  // Registers a parameter block and returns its slot.
  int add(Eigen::Index rows, Eigen::Index cols);

  // Advances the shared step counter. Call once per optimization step,
  // before the per-slot updates.
  void begin_step() { ++step_; }

  void update(int slot, Eigen::Ref<Eigen::MatrixXd> param,
              const Eigen::MatrixXd& grad, double lr);

  long step() const { return step_; }

 private:
  AdamWConfig config_;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
  long step_ = 0;
};

// lr0 * (1 + cos(pi * epoch / max_epochs)) / 2, clamped to [0, max_epochs].
double cosine_lr(double lr0, int epoch, int max_epochs);

}  // namespace blendsem

#endif  // BLENDSEM_ADAMW_H_
