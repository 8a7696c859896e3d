// core/src/probe.cc

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

#include "spinlab/probe.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>
#include <set>

namespace spinlab {

namespace {

// Parameters packed as a (D + 1) x C matrix; the last row is the bias.
struct SoftmaxObjective {
  const Matrix &x;  // N x D, standardised
  const std::vector<int> &y;
  int classes;
  double l2;

  double Evaluate(const Matrix &w, Matrix *grad) const {
    const Eigen::Index N = x.rows(), D = x.cols();
    Matrix logits = x * w.topRows(D);
    logits.rowwise() += w.row(D);
    CompensatedSum loss;
    Matrix g = Matrix::Zero(N, classes);
    for (Eigen::Index n = 0; n < N; ++n) {
      const double m = logits.row(n).maxCoeff();
      const RowVector e = (logits.row(n).array() - m).exp().matrix();
      const double z = e.sum();
      loss.Add(-(logits(n, y[n]) - m - std::log(z)));
      g.row(n) = e / z;
      g(n, y[n]) -= 1.0;
    }
    g /= static_cast<double>(N);
    grad->resize(D + 1, classes);
    grad->topRows(D) = x.transpose() * g + l2 * w.topRows(D);
    grad->row(D) = g.colwise().sum();
    return loss.Value() / static_cast<double>(N) + 0.5 * l2 * w.topRows(D).squaredNorm();
  }
};

double Dot(const Matrix &a, const Matrix &b) { return (a.array() * b.array()).sum(); }

// Limited-memory BFGS with Armijo backtracking.
int Minimise(const SoftmaxObjective &f, Matrix *w, double tol, int max_iters, int memory,
             double *final_loss) {
  Matrix g;
  double loss = f.Evaluate(*w, &g);
  std::deque<std::pair<Matrix, Matrix>> hist;  // (s, y)
  int it = 0;
  for (; it < max_iters; ++it) {
    // Two-loop recursion.
    Matrix q = g;
    std::vector<double> alpha(hist.size());
    for (int i = static_cast<int>(hist.size()) - 1; i >= 0; --i) {
      const auto &[s, y] = hist[i];
      alpha[i] = Dot(s, q) / Dot(y, s);
      q -= alpha[i] * y;
    }
    if (!hist.empty()) {
      const auto &[s, y] = hist.back();
      q *= Dot(s, y) / Dot(y, y);
    }
    for (size_t i = 0; i < hist.size(); ++i) {
      const auto &[s, y] = hist[i];
      const double beta = Dot(y, q) / Dot(y, s);
      q += (alpha[i] - beta) * s;
    }
    Matrix dir = -q;
    double slope = Dot(g, dir);
    if (!(slope < 0.0)) {
      dir = -g;
      slope = -g.squaredNorm();
      hist.clear();
    }
    if (slope == 0.0) break;
    double step = hist.empty() ? std::min(1.0, 1.0 / std::sqrt(g.squaredNorm())) : 1.0;
    Matrix w_new, g_new;
    double loss_new = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      w_new = *w + step * dir;
      loss_new = f.Evaluate(w_new, &g_new);
      if (loss_new <= loss + 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (!(loss_new <= loss)) break;
    Matrix s = w_new - *w, y = g_new - g;
    if (Dot(s, y) > 1e-12) {
      hist.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(hist.size()) > memory) hist.pop_front();
    }
    const double change = loss - loss_new;
    *w = std::move(w_new);
    g = std::move(g_new);
    loss = loss_new;
    if (change < tol) {
      ++it;
      break;
    }
  }
  *final_loss = loss;
  return it;
}

}  // namespace

ProbeResult SpeakerProbe(const Matrix &features, const std::vector<int> &labels,
                         uint64_t split_seed, const ProbeOptions &options) {
  if (static_cast<size_t>(features.rows()) != labels.size())
    throw ConfigError("probe: feature rows and labels differ in length");
  if (!(options.train_fraction > 0.0 && options.train_fraction < 1.0))
    throw ConfigError("probe: train_fraction must lie in (0, 1)");
  CheckFinite(features, "probe features");
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) throw DataError("probe: need at least two classes, got a single class");
  if (*distinct.begin() < 0) throw DataError("probe: negative class label");
  const int C = *distinct.rbegin() + 1;

  const Eigen::Index N = features.rows();
  std::vector<Eigen::Index> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(split_seed);
  std::shuffle(order.begin(), order.end(), rng);
  const Eigen::Index n_train = static_cast<Eigen::Index>(std::floor(options.train_fraction * N));
  if (n_train < 1 || n_train >= N) throw DataError("probe: too few frames for a train/test split");

  const Eigen::Index D = features.cols();
  Matrix xtr(n_train, D), xte(N - n_train, D);
  std::vector<int> ytr(n_train), yte(N - n_train);
  for (Eigen::Index i = 0; i < N; ++i) {
    if (i < n_train) {
      xtr.row(i) = features.row(order[i]);
      ytr[i] = labels[order[i]];
    } else {
      xte.row(i - n_train) = features.row(order[i]);
      yte[i - n_train] = labels[order[i]];
    }
  }
  const RowVector mean = xtr.colwise().mean();
  RowVector sd = ((xtr.rowwise() - mean).colwise().squaredNorm() / n_train).cwiseSqrt();
  for (Eigen::Index d = 0; d < D; ++d)
    if (!(sd(d) > 1e-12)) sd(d) = 1.0;
  xtr = (xtr.rowwise() - mean).array().rowwise() / sd.array();
  xte = (xte.rowwise() - mean).array().rowwise() / sd.array();

  SoftmaxObjective obj{xtr, ytr, C, options.l2};
  Matrix w = Matrix::Zero(D + 1, C);
  ProbeResult r;
  r.iterations = Minimise(obj, &w, options.tol, options.max_iters, options.memory, &r.train_loss);

  Matrix logits = xte * w.topRows(D);
  logits.rowwise() += w.row(D);
  int64_t correct = 0;
  for (Eigen::Index n = 0; n < logits.rows(); ++n) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < C; ++c)
      if (logits(n, c) > logits(n, best)) best = c;
    if (best == yte[n]) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(logits.rows());
  r.n_train = n_train;
  r.n_test = N - n_train;
  r.n_classes = static_cast<int>(distinct.size());
  return r;
}

}  // namespace spinlab
