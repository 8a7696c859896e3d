// tests/support/grad-check.h

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

#ifndef SPINLAB_TESTS_GRAD_CHECK_H_
#define SPINLAB_TESTS_GRAD_CHECK_H_

// Central finite-difference check of the swapped-loss gradients on small
// random models, with the targets held fixed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spinlab/training.h"

namespace spinlab::testing {

struct GradCheckCase {
  ModelParams params;
  FrameBatchPair pair;
  AssignmentMatrix Q, Qt;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_block;
  bool frozen_exactly_zero = true;
  int n_checked = 0;
};

// Relative error with an absolute floor on the denominator: entries whose
// true gradient is tiny are compared on an absolute scale, where central
// differences with h = 1e-6 carry about 1e-10 of rounding noise.
inline constexpr double kGradFloor = 1e-6;

inline double GradRelError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), kGradFloor});
}

inline AssignmentMatrix RandomStochastic(int rows, int cols, std::mt19937_64 *rng) {
  std::gamma_distribution<double> g(0.5, 1.0);
  AssignmentMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = g(*rng) + 1e-3;
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

// B <= 8, K <= 5, D <= 6, small encoders with a random frozen split.
inline GradCheckCase RandomGradCase(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ModelDims dims;
  dims.input_dim = pick(2, 5);
  dims.hidden_dim = pick(2, 5);
  dims.n_layers = pick(0, 3);
  dims.n_frozen = pick(0, dims.n_layers);
  dims.K = pick(2, 5);
  dims.D = pick(2, 6);
  dims.tau = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
  dims.projection_bias = pick(0, 1) == 1;
  GradCheckCase c;
  c.params = InitParams(dims, seed);
  std::normal_distribution<double> n(0.0, 1.0);
  auto &enc = c.params.encoder;
  enc.input_mean = RowVector(dims.input_dim);
  enc.input_scale = RowVector(dims.input_dim);
  for (int i = 0; i < dims.input_dim; ++i) {
    enc.input_mean(i) = 0.3 * n(rng);
    enc.input_scale(i) = 0.5 + std::abs(n(rng));
  }
  for (auto &l : enc.layers)
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias(i) = 0.1 * n(rng);
  if (dims.projection_bias)
    for (Eigen::Index i = 0; i < c.params.projection.bias.size(); ++i)
      c.params.projection.bias(i) = 0.1 * n(rng);
  const int B = pick(1, 8);
  c.pair.original = FrameMatrix(B, dims.input_dim);
  c.pair.perturbed = FrameMatrix(B, dims.input_dim);
  for (int b = 0; b < B; ++b)
    for (int i = 0; i < dims.input_dim; ++i) {
      c.pair.original(b, i) = n(rng);
      c.pair.perturbed(b, i) = c.pair.original(b, i) + 0.3 * n(rng);
    }
  c.pair.labels.assign(B, 0);
  c.pair.speakers.assign(B, 0);
  c.Q = RandomStochastic(B, dims.K, &rng);
  c.Qt = RandomStochastic(B, dims.K, &rng);
  return c;
}

// Compares every trainable entry against central differences and checks
// that frozen blocks come back as exact zeros.
inline GradCheckResult CheckGradients(const GradCheckCase &c, double h = 1e-6) {
  GradCheckResult result;
  const LossAndGradients lg = LossGradientsWithTargets(c.pair, c.params, c.Q, c.Qt);
  ModelParams p = c.params;
  auto loss = [&] { return LossGradientsWithTargets(c.pair, p, c.Q, c.Qt).loss; };
  auto check = [&](double *entry, double analytic, const std::string &block) {
    const double saved = *entry;
    *entry = saved + h;
    const double up = loss();
    *entry = saved - h;
    const double down = loss();
    *entry = saved;
    const double err = GradRelError(analytic, (up - down) / (2.0 * h));
    ++result.n_checked;
    if (err > result.max_rel_error) {
      result.max_rel_error = err;
      result.worst_block = block;
    }
  };
  auto &layers = p.encoder.layers;
  for (size_t l = 0; l < layers.size(); ++l) {
    const bool frozen = static_cast<int>(l) < p.encoder.n_frozen;
    const AffineLayer &g = lg.grads.encoder[l];
    if (frozen) {
      if (g.weight.size() != 0 && g.weight.cwiseAbs().maxCoeff() != 0.0)
        result.frozen_exactly_zero = false;
      if (g.bias.size() != 0 && g.bias.cwiseAbs().maxCoeff() != 0.0)
        result.frozen_exactly_zero = false;
      continue;
    }
    const std::string name = "layer" + std::to_string(l);
    for (Eigen::Index i = 0; i < layers[l].weight.size(); ++i)
      check(layers[l].weight.data() + i, g.weight.data()[i], name + ".weight");
    for (Eigen::Index i = 0; i < layers[l].bias.size(); ++i)
      check(layers[l].bias.data() + i, g.bias.data()[i], name + ".bias");
  }
  for (Eigen::Index i = 0; i < p.projection.weight.size(); ++i)
    check(p.projection.weight.data() + i, lg.grads.projection_weight.data()[i],
          "projection.weight");
  if (p.projection.use_bias)
    for (Eigen::Index i = 0; i < p.projection.bias.size(); ++i)
      check(p.projection.bias.data() + i, lg.grads.projection_bias.data()[i],
            "projection.bias");
  for (Eigen::Index i = 0; i < p.codebook.codewords.size(); ++i)
    check(p.codebook.codewords.data() + i, lg.grads.codewords.data()[i], "codewords");
  return result;
}

}  // namespace spinlab::testing

#endif  // SPINLAB_TESTS_GRAD_CHECK_H_
