// core/include/spinlab/kmeans.h

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

#ifndef SPINLAB_KMEANS_H_
#define SPINLAB_KMEANS_H_

#include <cstdint>
#include <vector>

#include "spinlab/types.h"

namespace spinlab {

struct KMeansOptions {
  int n_runs = 3;
  int max_iters = 300;
  /// Stop when the relative inertia change falls below this.
  double rel_tol = 1e-6;
  uint64_t seed = 0;
};

struct KMeansResult {
  Matrix centroids;  // K x D
  std::vector<int> assignments;
  double inertia = 0.0;
  /// Inertia after every Lloyd iteration of the returned run.
  std::vector<double> inertia_trace;
  int iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations; best of n_runs by
/// inertia. Throws ConfigError when K exceeds the number of rows.
KMeansResult KMeans(const Matrix &data, int K, const KMeansOptions &options = {});

/// Index of the nearest centroid for every row (ties to the lowest index).
std::vector<int> AssignNearest(const Matrix &data, const Matrix &centroids);

}  // namespace spinlab

#endif  // SPINLAB_KMEANS_H_
