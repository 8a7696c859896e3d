// core/src/kmeans.cc

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

#include "spinlab/kmeans.h"

#include <cmath>
#include <limits>
#include <random>

namespace spinlab {

namespace {

// Squared distances from every row to every centroid, via the expansion
// |x|^2 - 2 x.c + |c|^2 clamped at zero.
Matrix SquaredDistances(const Matrix &data, const Matrix &centroids) {
  const Vector xn = data.rowwise().squaredNorm();
  const Vector cn = centroids.rowwise().squaredNorm();
  Matrix d = -2.0 * data * centroids.transpose();
  d.colwise() += xn;
  d.rowwise() += cn.transpose();
  return d.cwiseMax(0.0);
}

double Assign(const Matrix &data, const Matrix &centroids, std::vector<int> *ids) {
  const Matrix d = SquaredDistances(data, centroids);
  ids->resize(data.rows());
  CompensatedSum inertia;
  for (Eigen::Index b = 0; b < d.rows(); ++b) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < d.cols(); ++k)
      if (d(b, k) < d(b, best)) best = k;
    (*ids)[b] = static_cast<int>(best);
    // Exact distance for the chosen centroid so inertia is not biased by the
    // expansion's cancellation error.
    inertia.Add((data.row(b) - centroids.row(best)).squaredNorm());
  }
  return inertia.Value();
}

Matrix PlusPlusInit(const Matrix &data, int K, std::mt19937_64 *rng) {
  const Eigen::Index N = data.rows();
  Matrix c(K, data.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, N - 1);
  c.row(0) = data.row(pick(*rng));
  Vector best = (data.rowwise() - c.row(0)).rowwise().squaredNorm();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 1; k < K; ++k) {
    const double total = best.sum();
    Eigen::Index chosen = 0;
    if (total > 0.0) {
      double r = u(*rng) * total;
      chosen = N - 1;
      for (Eigen::Index i = 0; i < N; ++i) {
        r -= best(i);
        if (r < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(*rng);
    }
    c.row(k) = data.row(chosen);
    best = best.cwiseMin((data.rowwise() - c.row(k)).rowwise().squaredNorm());
  }
  return c;
}

KMeansResult SingleRun(const Matrix &data, int K, const KMeansOptions &opt,
                       std::mt19937_64 *rng) {
  KMeansResult r;
  r.centroids = PlusPlusInit(data, K, rng);
  double prev = Assign(data, r.centroids, &r.assignments);
  r.inertia_trace.push_back(prev);
  for (int it = 0; it < opt.max_iters; ++it) {
    Matrix sums = Matrix::Zero(K, data.cols());
    std::vector<int64_t> counts(K, 0);
    for (Eigen::Index b = 0; b < data.rows(); ++b) {
      sums.row(r.assignments[b]) += data.row(b);
      ++counts[r.assignments[b]];
    }
    // Empty clusters keep their previous centroid, so inertia cannot rise.
    for (int k = 0; k < K; ++k)
      if (counts[k] > 0) r.centroids.row(k) = sums.row(k) / static_cast<double>(counts[k]);
    const double cur = Assign(data, r.centroids, &r.assignments);
    r.inertia_trace.push_back(cur);
    r.iterations = it + 1;
    const bool done = prev == 0.0 || std::abs(prev - cur) / prev < opt.rel_tol;
    prev = cur;
    if (done) break;
  }
  r.inertia = prev;
  return r;
}

}  // namespace

KMeansResult KMeans(const Matrix &data, int K, const KMeansOptions &options) {
  if (K < 1) throw ConfigError("kmeans: K must be >= 1");
  if (K > data.rows())
    throw ConfigError("kmeans: K = " + std::to_string(K) + " exceeds the " +
                      std::to_string(data.rows()) + " data rows");
  if (options.n_runs < 1) throw ConfigError("kmeans: n_runs must be >= 1");
  CheckFinite(data, "kmeans input");
  std::mt19937_64 rng(options.seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int run = 0; run < options.n_runs; ++run) {
    KMeansResult r = SingleRun(data, K, options, &rng);
    if (r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

std::vector<int> AssignNearest(const Matrix &data, const Matrix &centroids) {
  std::vector<int> ids;
  Assign(data, centroids, &ids);
  return ids;
}

}  // namespace spinlab
