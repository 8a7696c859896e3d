// tests/support/sinkhorn-oracles.h

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

#ifndef SPINLAB_TESTS_SINKHORN_ORACLES_H_
#define SPINLAB_TESTS_SINKHORN_ORACLES_H_

// Random score matrices and a brute-force search over the 4 x 2
// transportation polytope.

#include <algorithm>
#include <array>
#include <random>

#include "spinlab/sinkhorn.h"

namespace spinlab::testing {

inline FrameMatrix RandomUnitRows(int rows, int cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  FrameMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = n(rng);
    m.row(i) /= m.row(i).norm();
  }
  return m;
}

// Cosine scores between B random unit vectors and K random unit codewords.
inline Matrix RandomScores(int B, int K, int D, uint64_t seed) {
  return RandomUnitRows(B, D, seed) * RandomUnitRows(K, D, seed + 1000).transpose();
}

struct PolytopeOptimum {
  Matrix plan;  // 4 x 2, rows sum to 1/4 and columns to 1/2
  double value = 0.0;
};

// With B = 4 and K = 2 a plan is fixed by x_b = Q(b, 0) in [0, 1/4] with
// sum_b x_b = 1/2. A 101^3 grid over (x_0, x_1, x_2), then four zooms of
// 21^3 points at ten times finer spacing around the incumbent.
inline PolytopeOptimum BruteForcePolytope4x2(const Matrix &scores, double epsilon) {
  auto plan_of = [](const std::array<double, 4> &x) {
    Matrix plan(4, 2);
    for (int b = 0; b < 4; ++b) {
      plan(b, 0) = x[b];
      plan(b, 1) = 0.25 - x[b];
    }
    return plan;
  };
  std::array<double, 4> best{0.125, 0.125, 0.125, 0.125};
  double best_value = EntropicObjective(plan_of(best), scores, epsilon);
  double step = 0.25 / 100;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  int n = 101;
  for (int level = 0; level < 5; ++level) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          std::array<double, 4> x{lo[0] + i * step, lo[1] + j * step, lo[2] + k * step, 0.0};
          x[3] = 0.5 - x[0] - x[1] - x[2];
          if (std::any_of(x.begin(), x.end(), [](double v) { return v < 0.0 || v > 0.25; }))
            continue;
          const double v = EntropicObjective(plan_of(x), scores, epsilon);
          if (v > best_value) {
            best_value = v;
            best = x;
          }
        }
    step /= 10.0;
    n = 21;
    for (int d = 0; d < 3; ++d) lo[d] = best[d] - 10.0 * step;
  }
  return {plan_of(best), best_value};
}

}  // namespace spinlab::testing

#endif  // SPINLAB_TESTS_SINKHORN_ORACLES_H_
