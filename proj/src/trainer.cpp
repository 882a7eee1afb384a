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

#include "blendsem/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "blendsem/adamw.h"
#include "blendsem/error.h"
#include "blendsem/infonce.h"
#include "blendsem/metrics.h"

namespace blendsem {
namespace {

void check_pairs(const PairedFeatures& p, const char* name) {
  if (p.image.rows() != p.motion.rows()) {
    throw StructuralError(std::string(name) + ": image and motion row counts differ");
  }
  if (p.image.rows() < 2) {
    throw ParameterError(std::string(name) + " split needs at least 2 pairs");
  }
  if (!p.image.allFinite() || !p.motion.allFinite()) {
    throw ValidationError(std::string(name) + " split has non-finite features");
  }
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m,
                       const std::vector<Eigen::Index>& order, std::size_t from,
                       std::size_t count) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), m.cols());
  for (std::size_t j = 0; j < count; ++j) {
    out.row(static_cast<Eigen::Index>(j)) = m.row(order[from + j]);
  }
  return out;
}

// Parameter slots for one encoder inside the shared optimizer.
struct Slots {
  int w1, b1, w2, b2;
};

Slots register_encoder(AdamW& opt, const EncoderSpec& s) {
  return {opt.add(s.hidden_dim, s.input_dim), opt.add(s.hidden_dim, 1),
          opt.add(s.output_dim, s.hidden_dim), opt.add(s.output_dim, 1)};
}

void apply(AdamW& opt, const Slots& slots, Encoder& enc,
           const EncoderParams& g, double lr) {
  auto& p = enc.mutable_params();
  opt.update(slots.w1, p.w1, g.w1, lr);
  opt.update(slots.b1, p.b1, g.b1, lr);
  opt.update(slots.w2, p.w2, g.w2, lr);
  opt.update(slots.b2, p.b2, g.b2, lr);
}

}  // namespace

void TrainConfig::validate() const {
  if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
  if (!(learning_rate > 0.0)) throw ParameterError("learning rate must be > 0");
  if (!(weight_decay > 0.0)) throw ParameterError("weight decay must be > 0");
  if (max_epochs <= 0) throw ParameterError("max_epochs must be > 0");
  if (patience <= 0) throw ParameterError("patience must be > 0");
  if (batch_size < 2) throw ParameterError("batch size must be >= 2");
  if (hidden_dim <= 0 || output_dim <= 0) {
    throw ParameterError("encoder dimensions must be > 0");
  }
  if (epoch_limit < 0) throw ParameterError("epoch_limit must be >= 0");
}

double validation_r_precision1(const Encoder& image_encoder,
                               const Encoder& motion_encoder,
                               const PairedFeatures& val_set, int batch_size,
                               std::uint64_t seed) {
  RetrievalProtocol protocol;
  protocol.batch_size =
      std::min<int>(batch_size, static_cast<int>(val_set.size()));
  protocol.seed = seed;
  protocol.ks = {1};
  return evaluate_retrieval(image_encoder.embed(val_set.image),
                            motion_encoder.embed(val_set.motion), protocol)
      .r_precision[0];
}

TrainResult train(const PairedFeatures& train_set, const PairedFeatures& val_set,
                  const TrainConfig& config) {
  config.validate();
  check_pairs(train_set, "training");
  check_pairs(val_set, "validation");
  if (val_set.image.cols() != train_set.image.cols() ||
      val_set.motion.cols() != train_set.motion.cols()) {
    throw StructuralError("training and validation feature widths differ");
  }

  std::mt19937_64 rng(config.seed);
  Encoder img = Encoder::initialize(
      {static_cast<int>(train_set.image.cols()), config.hidden_dim,
       config.output_dim},
      rng);
  Encoder mot = Encoder::initialize(
      {static_cast<int>(train_set.motion.cols()), config.hidden_dim,
       config.output_dim},
      rng);

  AdamWConfig opt_cfg;
  opt_cfg.weight_decay = config.weight_decay;
  AdamW opt(opt_cfg);
  const Slots img_slots = register_encoder(opt, img.spec());
  const Slots mot_slots = register_encoder(opt, mot.spec());

  TrainResult result;
  result.image_encoder = img;
  result.motion_encoder = mot;
  result.best_val_r_precision1 = -1.0;

  const auto n = static_cast<std::size_t>(train_set.size());
  const auto b = static_cast<std::size_t>(config.batch_size);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);

  const int last_epoch = config.epoch_limit > 0
                             ? std::min(config.epoch_limit, config.max_epochs)
                             : config.max_epochs;
  int stale = 0;
  for (int epoch = 0; epoch < last_epoch; ++epoch) {
    const double lr = cosine_lr(config.learning_rate, epoch, config.max_epochs);
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    int steps = 0;
    for (std::size_t from = 0; from < n; from += b) {
      const std::size_t count = std::min(b, n - from);
      if (count < 2) break;  // a single pair has no negatives
      const auto ti = img.forward(gather(train_set.image, order, from, count));
      const auto tm = mot.forward(gather(train_set.motion, order, from, count));
      const auto nce =
          infonce_loss_and_grad(ti.embedding, tm.embedding, config.temperature);
      if (!std::isfinite(nce.loss)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", step " << steps
            << ", lr " << lr << ", image weights finite "
            << img.params().all_finite() << ", motion weights finite "
            << mot.params().all_finite();
        throw TrainingError(msg.str());
      }
      const EncoderParams gi = img.backward(ti, nce.grad_image);
      const EncoderParams gm = mot.backward(tm, nce.grad_motion);
      opt.begin_step();
      apply(opt, img_slots, img, gi, lr);
      apply(opt, mot_slots, mot, gm, lr);
      loss_sum += nce.loss;
      ++steps;
    }
    if (!img.params().all_finite() || !mot.params().all_finite()) {
      throw TrainingError("weights became non-finite at epoch " +
                          std::to_string(epoch));
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.learning_rate = lr;
    rec.train_loss = steps > 0 ? loss_sum / steps : 0.0;
    rec.val_r_precision1 = validation_r_precision1(img, mot, val_set,
                                                   config.batch_size, config.seed);
    result.curve.push_back(rec);

    if (rec.val_r_precision1 > result.best_val_r_precision1) {
      result.best_val_r_precision1 = rec.val_r_precision1;
      result.best_epoch = epoch;
      result.image_encoder = img;
      result.motion_encoder = mot;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return result;
}

Eigen::MatrixXd Evaluator::embed_image(const Eigen::MatrixXd& descriptions) const {
  return image_encoder.embed(descriptions);
}

Eigen::MatrixXd Evaluator::embed_motion(const Eigen::MatrixXd& raw_motion) const {
  return motion_encoder.embed(zscore_apply(motion_stats, raw_motion));
}

FitResult fit_evaluator(const PairedFeatures& raw_train,
                        const PairedFeatures& raw_val, const TrainConfig& config) {
  check_pairs(raw_train, "training");
  const ZScoreStats stats = zscore_fit(raw_train.motion);
  const PairedFeatures train_set{raw_train.image,
                                 zscore_apply(stats, raw_train.motion)};
  const PairedFeatures val_set{raw_val.image, zscore_apply(stats, raw_val.motion)};
  TrainResult t = train(train_set, val_set, config);
  FitResult r;
  r.evaluator = {config, stats, std::move(t.image_encoder),
                 std::move(t.motion_encoder)};
  r.curve = std::move(t.curve);
  r.best_epoch = t.best_epoch;
  r.best_val_r_precision1 = t.best_val_r_precision1;
  return r;
}

}  // namespace blendsem
