// core/include/spinlab/model.h

// Copyright 2026  The spinlab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINLAB_MODEL_H_
#define SPINLAB_MODEL_H_

#include <cstdint>
#include <vector>

#include "spinlab/types.h"

namespace spinlab {

/// y = tanh(x W + b), W is in_dim x out_dim.
struct AffineLayer {
  Matrix weight;
  Vector bias;
  bool operator==(const AffineLayer &o) const {
    return weight == o.weight && bias == o.bias;
  }
};

/// MLP over feature frames. The first n_frozen layers never receive
/// gradients. An encoder with no layers is the identity map.
struct EncoderParams {
  std::vector<AffineLayer> layers;
  int n_frozen = 0;
  int input_dim = 0;
  int hidden_dim = 0;
  // Fixed per-dimension input standardisation, applied before layer 0.
  RowVector input_mean;
  RowVector input_scale;

  int n_trainable() const { return static_cast<int>(layers.size()) - n_frozen; }
  int output_dim() const { return layers.empty() ? input_dim : hidden_dim; }
  bool operator==(const EncoderParams &o) const;
};

struct ProjectionParams {
  Matrix weight;  // hidden_dim x D
  Vector bias;    // D (zero and untrained when use_bias is false)
  bool use_bias = true;
  bool operator==(const ProjectionParams &o) const {
    return weight == o.weight && bias == o.bias && use_bias == o.use_bias;
  }
};

/// K unit-norm codewords (rows) and the softmax temperature.
struct Codebook {
  Matrix codewords;  // K x D
  double tau = 0.1;

  int K() const { return static_cast<int>(codewords.rows()); }
  int D() const { return static_cast<int>(codewords.cols()); }
  /// Rescales every codeword to unit L2 norm.
  void Renormalize();
  /// max_k | ||c_k|| - 1 |
  double MaxNormError() const;
  bool operator==(const Codebook &o) const {
    return codewords == o.codewords && tau == o.tau;
  }
};

struct ModelParams {
  EncoderParams encoder;
  ProjectionParams projection;
  Codebook codebook;
  bool operator==(const ModelParams &o) const {
    return encoder == o.encoder && projection == o.projection && codebook == o.codebook;
  }
};

struct ModelDims {
  int input_dim = 40;
  int hidden_dim = 128;
  int n_layers = 3;
  int n_frozen = 1;
  int K = 256;
  int D = 256;
  double tau = 0.1;
  bool projection_bias = true;
};

/// Glorot-uniform affine weights, zero biases, codewords drawn from a
/// spherical Gaussian and normalised. Deterministic per seed.
ModelParams InitParams(const ModelDims &dims, uint64_t seed);

/// An encoder with no layers (identity map) of the given width.
EncoderParams IdentityEncoder(int dim);

/// Per-layer activations of the encoder; element 0 is the standardised
/// input, element l+1 the output of layer l.
std::vector<FrameMatrix> EncodeLayers(const FrameMatrix &batch, const EncoderParams &params);

FrameMatrix Encode(const FrameMatrix &batch, const EncoderParams &params);

/// Rows of (hidden W + b), L2-normalised. Throws NumericError if a projected
/// row has norm below 1e-8.
FrameMatrix ProjectNormalize(const FrameMatrix &hidden, const ProjectionParams &proj);

/// Softmax over z_b . c_k / tau, with max subtraction. Throws ConfigError if
/// Z rows are not unit norm (tolerance 1e-6).
AssignmentMatrix CodeProbabilities(const FrameMatrix &Z, const Codebook &codebook);

/// Row-wise log-softmax of z_b . c_k / tau.
Matrix CodeLogProbabilities(const FrameMatrix &Z, const Codebook &codebook);

/// Index of the row maximum; ties go to the lowest index.
std::vector<int> QuantizeArgmax(const AssignmentMatrix &P);

/// Z for a batch: encode, then project and normalise.
FrameMatrix Represent(const FrameMatrix &batch, const ModelParams &params);

}  // namespace spinlab

#endif  // SPINLAB_MODEL_H_
