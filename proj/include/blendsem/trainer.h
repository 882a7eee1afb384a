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

#ifndef BLENDSEM_TRAINER_H_
#define BLENDSEM_TRAINER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "blendsem/encoder.h"
#include "blendsem/zscore.h"

namespace blendsem {

struct TrainConfig {
  double temperature = 0.07;
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  int max_epochs = 1000;  // also the length of the cosine schedule
  int patience = 10;
  int batch_size = 32;
  std::uint64_t seed = 42;
  int hidden_dim = 256;
  int output_dim = 256;
  // Optional hard stop below max_epochs that leaves the schedule unchanged.
  // 0 means no extra limit.
  int epoch_limit = 0;

  // Throws ParameterError on a non-positive rate, size or count.
  void validate() const;
};

// Paired rows: image[i] belongs with motion[i].
struct PairedFeatures {
  Eigen::MatrixXd image;
  Eigen::MatrixXd motion;

  Eigen::Index size() const { return image.rows(); }
};

struct EpochRecord {
  int epoch = 0;
  double learning_rate = 0.0;
  double train_loss = 0.0;
  double val_r_precision1 = 0.0;
};

struct TrainResult {
  Encoder image_encoder;
  Encoder motion_encoder;
  std::vector<EpochRecord> curve;
  int best_epoch = 0;
  double best_val_r_precision1 = 0.0;
};

// Trains both encoders on features that are already standardized. Returns
// the encoders from the epoch with the highest validation R-Precision@1.
// Throws TrainingError if the loss becomes non-finite.
TrainResult train(const PairedFeatures& train_set, const PairedFeatures& val_set,
                  const TrainConfig& config);

// Validation R-Precision@1 under the batched protocol. Uses batches of
// min(batch_size, N) so small validation splits still produce a score.
double validation_r_precision1(const Encoder& image_encoder,
                               const Encoder& motion_encoder,
                               const PairedFeatures& val_set,
                               int batch_size, std::uint64_t seed);

// A trained evaluator: standardization plus both encoders.
struct Evaluator {
  TrainConfig config;
  ZScoreStats motion_stats;
  Encoder image_encoder;
  Encoder motion_encoder;

  Eigen::MatrixXd embed_image(const Eigen::MatrixXd& descriptions) const;
  // Takes raw motion rows and standardizes them first.
  Eigen::MatrixXd embed_motion(const Eigen::MatrixXd& raw_motion) const;
};

struct FitResult {
  Evaluator evaluator;
  std::vector<EpochRecord> curve;
  int best_epoch = 0;
  double best_val_r_precision1 = 0.0;
};

// Fits z-score statistics on the raw training motion, standardizes both
// splits and trains.
FitResult fit_evaluator(const PairedFeatures& raw_train,
                        const PairedFeatures& raw_val, const TrainConfig& config);

}  // namespace blendsem

#endif  // BLENDSEM_TRAINER_H_
