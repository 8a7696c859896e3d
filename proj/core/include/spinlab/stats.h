// core/include/spinlab/stats.h

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

#ifndef SPINLAB_STATS_H_
#define SPINLAB_STATS_H_

#include <vector>

namespace spinlab {

/// Ranks starting at 1 with ties given their average rank.
std::vector<double> AverageRanks(const std::vector<double> &x);

/// Pearson correlation of average ranks. Throws ConfigError for unequal
/// lengths, fewer than two values, or a constant input.
double Spearman(const std::vector<double> &x, const std::vector<double> &y);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;  // two-sided
};

/// Welch's unequal-variance two-sample t-test. Throws ConfigError when a
/// sample has fewer than two values or both variances are zero.
WelchResult WelchTTest(const std::vector<double> &a, const std::vector<double> &b);

}  // namespace spinlab

#endif  // SPINLAB_STATS_H_
