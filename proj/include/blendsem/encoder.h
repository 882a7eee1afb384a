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

#ifndef BLENDSEM_ENCODER_H_
#define BLENDSEM_ENCODER_H_

#include <random>

#include <Eigen/Dense>

namespace blendsem {

struct EncoderSpec {
  int input_dim = 0;
  int hidden_dim = 256;
  int output_dim = 256;

  friend bool operator==(const EncoderSpec&, const EncoderSpec&) = default;
};

// Parameters of  x -> normalize(W2 tanh(W1 x + b1) + b2).
struct EncoderParams {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;  // output x hidden
  Eigen::VectorXd b2;

  static EncoderParams zeros_like(const EncoderSpec& spec);
  bool all_finite() const;
};

// Activations kept from a batch forward pass for the backward pass.
struct EncoderTrace {
  Eigen::MatrixXd input;      // N x input
  Eigen::MatrixXd hidden;     // tanh activations, N x hidden
  Eigen::MatrixXd output;     // pre-normalization, N x output
  Eigen::VectorXd norms;      // row norms of output
  Eigen::MatrixXd embedding;  // unit rows, N x output
};

// Two affine maps with tanh between them and a unit-norm output.
class Encoder {
 public:
  Encoder() = default;
  Encoder(EncoderSpec spec, EncoderParams params);

  // Glorot-uniform weights, zero biases.
  static Encoder initialize(const EncoderSpec& spec, std::mt19937_64& rng);

  const EncoderSpec& spec() const { return spec_; }
  const EncoderParams& params() const { return params_; }
  EncoderParams& mutable_params() { return params_; }

  // Rows are samples. Throws StructuralError on a column-count mismatch.
  EncoderTrace forward(const Eigen::MatrixXd& batch) const;
  Eigen::MatrixXd embed(const Eigen::MatrixXd& batch) const;
  Eigen::VectorXd embed(const Eigen::VectorXd& x) const;

  // Parameter gradient given dLoss/dEmbedding for the traced batch.
  EncoderParams backward(const EncoderTrace& trace,
                         const Eigen::MatrixXd& grad_embedding) const;

 private:
  EncoderSpec spec_;
  EncoderParams params_;
};

}  // namespace blendsem

#endif  // BLENDSEM_ENCODER_H_
