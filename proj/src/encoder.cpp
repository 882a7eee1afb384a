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

#include "blendsem/encoder.h"

#include <cmath>

#include "blendsem/error.h"

namespace blendsem {
namespace {

// Rows whose pre-normalization norm falls below this are treated as having
// this norm, which keeps the embedding finite.
constexpr double kMinNorm = 1e-12;

void check_spec(const EncoderSpec& s) {
  if (s.input_dim <= 0 || s.hidden_dim <= 0 || s.output_dim <= 0) {
    throw ParameterError("encoder dimensions must be positive");
  }
}

}  // namespace

EncoderParams EncoderParams::zeros_like(const EncoderSpec& spec) {
  return {Eigen::MatrixXd::Zero(spec.hidden_dim, spec.input_dim),
          Eigen::VectorXd::Zero(spec.hidden_dim),
          Eigen::MatrixXd::Zero(spec.output_dim, spec.hidden_dim),
          Eigen::VectorXd::Zero(spec.output_dim)};
}

bool EncoderParams::all_finite() const {
  return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

Encoder::Encoder(EncoderSpec spec, EncoderParams params)
    : spec_(spec), params_(std::move(params)) {
  check_spec(spec_);
  if (params_.w1.rows() != spec_.hidden_dim ||
      params_.w1.cols() != spec_.input_dim ||
      params_.b1.size() != spec_.hidden_dim ||
      params_.w2.rows() != spec_.output_dim ||
      params_.w2.cols() != spec_.hidden_dim ||
      params_.b2.size() != spec_.output_dim) {
    throw StructuralError("encoder parameters do not match the spec");
  }
  if (!params_.all_finite()) throw ValidationError("encoder weights not finite");
}

Encoder Encoder::initialize(const EncoderSpec& spec, std::mt19937_64& rng) {
  check_spec(spec);
  auto glorot = [&rng](int fan_out, int fan_in) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-limit, limit);
    Eigen::MatrixXd w(fan_out, fan_in);
    // Fill row by row so the draw order is independent of storage order.
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) w(r, c) = u(rng);
    }
    return w;
  };
  EncoderParams p = EncoderParams::zeros_like(spec);
  p.w1 = glorot(spec.hidden_dim, spec.input_dim);
  p.w2 = glorot(spec.output_dim, spec.hidden_dim);
  return Encoder(spec, std::move(p));
}

EncoderTrace Encoder::forward(const Eigen::MatrixXd& batch) const {
  if (batch.cols() != spec_.input_dim) {
    throw StructuralError("encoder expects " + std::to_string(spec_.input_dim) +
                          " inputs, got " + std::to_string(batch.cols()));
  }
  EncoderTrace t;
  t.input = batch;
  t.hidden = ((batch * params_.w1.transpose()).rowwise() +
              params_.b1.transpose())
                 .array()
                 .tanh()
                 .matrix();
  t.output = (t.hidden * params_.w2.transpose()).rowwise() + params_.b2.transpose();
  t.norms = t.output.rowwise().norm().cwiseMax(kMinNorm);
  t.embedding = t.output.array().colwise() / t.norms.array();
  return t;
}

Eigen::MatrixXd Encoder::embed(const Eigen::MatrixXd& batch) const {
  return forward(batch).embedding;
}

Eigen::VectorXd Encoder::embed(const Eigen::VectorXd& x) const {
  return forward(x.transpose()).embedding.row(0).transpose();
}

EncoderParams Encoder::backward(const EncoderTrace& t,
                                const Eigen::MatrixXd& grad_embedding) const {
  // Through e = y / |y|:  dy = (de - e (e . de)) / |y|
  const Eigen::VectorXd proj =
      (t.embedding.array() * grad_embedding.array()).rowwise().sum();
  Eigen::MatrixXd dy =
      grad_embedding.array() - t.embedding.array().colwise() * proj.array();
  dy.array().colwise() /= t.norms.array();

  EncoderParams g;
  g.w2 = dy.transpose() * t.hidden;
  g.b2 = dy.colwise().sum().transpose();
  const Eigen::MatrixXd dh =
      ((dy * params_.w2).array() * (1.0 - t.hidden.array().square())).matrix();
  g.w1 = dh.transpose() * t.input;
  g.b1 = dh.colwise().sum().transpose();
  return g;
}

}  // namespace blendsem
