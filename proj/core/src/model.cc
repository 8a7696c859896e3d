// core/src/model.cc

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

#include "spinlab/model.h"

#include <cmath>
#include <random>

namespace spinlab {

bool EncoderParams::operator==(const EncoderParams &o) const {
  return layers == o.layers && n_frozen == o.n_frozen && input_dim == o.input_dim &&
         hidden_dim == o.hidden_dim && input_mean == o.input_mean &&
         input_scale == o.input_scale;
}

void Codebook::Renormalize() {
  for (Eigen::Index k = 0; k < codewords.rows(); ++k) {
    const double n = codewords.row(k).norm();
    if (!(n > 0.0) || !std::isfinite(n))
      throw NumericError("codeword " + std::to_string(k) + " has zero or non-finite norm");
    codewords.row(k) /= n;
  }
}

double Codebook::MaxNormError() const {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < codewords.rows(); ++k)
    worst = std::max(worst, std::abs(codewords.row(k).norm() - 1.0));
  return worst;
}

namespace {

Matrix GlorotUniform(int fan_in, int fan_out, std::mt19937_64 *rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> u(-limit, limit);
  Matrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(*rng);
  return w;
}

}  // namespace

EncoderParams IdentityEncoder(int dim) {
  EncoderParams e;
  e.input_dim = dim;
  e.hidden_dim = dim;
  e.input_mean = RowVector::Zero(dim);
  e.input_scale = RowVector::Ones(dim);
  return e;
}

ModelParams InitParams(const ModelDims &dims, uint64_t seed) {
  if (dims.input_dim <= 0 || dims.hidden_dim <= 0 || dims.K <= 0 || dims.D <= 0)
    throw ConfigError("init_params: dimensions must be positive");
  if (dims.n_layers < 0 || dims.n_frozen < 0 || dims.n_frozen > dims.n_layers)
    throw ConfigError("init_params: need 0 <= n_frozen <= n_layers");
  if (!(dims.tau > 0.0)) throw ConfigError("init_params: tau must be > 0");

  std::mt19937_64 rng(seed);
  ModelParams m;
  m.encoder = IdentityEncoder(dims.input_dim);
  m.encoder.hidden_dim = dims.n_layers > 0 ? dims.hidden_dim : dims.input_dim;
  m.encoder.n_frozen = dims.n_frozen;
  int in = dims.input_dim;
  for (int l = 0; l < dims.n_layers; ++l) {
    AffineLayer layer;
    layer.weight = GlorotUniform(in, dims.hidden_dim, &rng);
    layer.bias = Vector::Zero(dims.hidden_dim);
    m.encoder.layers.push_back(std::move(layer));
    in = dims.hidden_dim;
  }
  m.projection.weight = GlorotUniform(in, dims.D, &rng);
  m.projection.bias = Vector::Zero(dims.D);
  m.projection.use_bias = dims.projection_bias;

  std::normal_distribution<double> g(0.0, 1.0);
  m.codebook.codewords.resize(dims.K, dims.D);
  for (Eigen::Index i = 0; i < m.codebook.codewords.size(); ++i)
    m.codebook.codewords.data()[i] = g(rng);
  m.codebook.Renormalize();
  m.codebook.tau = dims.tau;
  return m;
}

std::vector<FrameMatrix> EncodeLayers(const FrameMatrix &batch, const EncoderParams &params) {
  if (batch.cols() != params.input_dim)
    throw ConfigError("encode: input has " + std::to_string(batch.cols()) +
                      " columns, encoder expects " + std::to_string(params.input_dim));
  std::vector<FrameMatrix> acts;
  acts.reserve(params.layers.size() + 1);
  FrameMatrix x = batch;
  if (params.input_mean.size() == batch.cols()) x.rowwise() -= params.input_mean;
  if (params.input_scale.size() == batch.cols())
    x.array().rowwise() *= params.input_scale.array();
  acts.push_back(std::move(x));
  for (const auto &layer : params.layers) {
    FrameMatrix a = acts.back() * layer.weight;
    a.rowwise() += layer.bias.transpose();
    acts.push_back(a.array().tanh().matrix());
  }
  return acts;
}

FrameMatrix Encode(const FrameMatrix &batch, const EncoderParams &params) {
  return std::move(EncodeLayers(batch, params).back());
}

FrameMatrix ProjectNormalize(const FrameMatrix &hidden, const ProjectionParams &proj) {
  if (hidden.cols() != proj.weight.rows())
    throw ConfigError("project: hidden width " + std::to_string(hidden.cols()) +
                      " != projection input " + std::to_string(proj.weight.rows()));
  FrameMatrix y = hidden * proj.weight;
  if (proj.use_bias) y.rowwise() += proj.bias.transpose();
  for (Eigen::Index b = 0; b < y.rows(); ++b) {
    const double n = y.row(b).norm();
    if (!(n >= 1e-8))
      throw NumericError("project: row " + std::to_string(b) +
                         " has near-zero norm before normalisation");
    y.row(b) /= n;
  }
  return y;
}

namespace {

void CheckUnitRows(const FrameMatrix &Z) {
  for (Eigen::Index b = 0; b < Z.rows(); ++b)
    if (std::abs(Z.row(b).norm() - 1.0) > 1e-6)
      throw ConfigError("code probabilities: row " + std::to_string(b) + " of Z is not unit norm");
}

}  // namespace

Matrix CodeLogProbabilities(const FrameMatrix &Z, const Codebook &codebook) {
  if (Z.cols() != codebook.codewords.cols())
    throw ConfigError("code probabilities: Z has " + std::to_string(Z.cols()) +
                      " columns, codebook D = " + std::to_string(codebook.D()));
  if (!(codebook.tau > 0.0)) throw ConfigError("code probabilities: tau must be > 0");
  CheckUnitRows(Z);
  Matrix s = (Z * codebook.codewords.transpose()) / codebook.tau;
  for (Eigen::Index b = 0; b < s.rows(); ++b) {
    const double m = s.row(b).maxCoeff();
    const double lse = m + std::log((s.row(b).array() - m).exp().sum());
    s.row(b).array() -= lse;
  }
  return s;
}

AssignmentMatrix CodeProbabilities(const FrameMatrix &Z, const Codebook &codebook) {
  AssignmentMatrix p = CodeLogProbabilities(Z, codebook).array().exp().matrix();
  // Renormalise so rows sum to one to rounding error.
  for (Eigen::Index b = 0; b < p.rows(); ++b) p.row(b) /= p.row(b).sum();
  return p;
}

std::vector<int> QuantizeArgmax(const AssignmentMatrix &P) {
  std::vector<int> ids(P.rows());
  for (Eigen::Index b = 0; b < P.rows(); ++b) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < P.cols(); ++k)
      if (P(b, k) > P(b, best)) best = k;
    ids[b] = static_cast<int>(best);
  }
  return ids;
}

FrameMatrix Represent(const FrameMatrix &batch, const ModelParams &params) {
  return ProjectNormalize(Encode(batch, params.encoder), params.projection);
}

}  // namespace spinlab
