// core/src/stats.cc

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

#include "spinlab/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "spinlab/types.h"

namespace spinlab {

std::vector<double> AverageRanks(const std::vector<double> &x) {
  std::vector<size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (size_t i = 0; i < idx.size();) {
    size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

double Mean(const std::vector<double> &v) {
  CompensatedSum s;
  for (double x : v) s.Add(x);
  return s.Value() / static_cast<double>(v.size());
}

double SampleVariance(const std::vector<double> &v, double mean) {
  CompensatedSum s;
  for (double x : v) s.Add((x - mean) * (x - mean));
  return s.Value() / static_cast<double>(v.size() - 1);
}

}  // namespace

double Spearman(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size()) throw ConfigError("spearman: inputs differ in length");
  if (x.size() < 2) throw ConfigError("spearman: need at least two values");
  const std::vector<double> rx = AverageRanks(x), ry = AverageRanks(y);
  const double mx = Mean(rx), my = Mean(ry);
  CompensatedSum sxy, sxx, syy;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy.Add((rx[i] - mx) * (ry[i] - my));
    sxx.Add((rx[i] - mx) * (rx[i] - mx));
    syy.Add((ry[i] - my) * (ry[i] - my));
  }
  if (sxx.Value() == 0.0 || syy.Value() == 0.0)
    throw ConfigError("spearman: undefined for a constant input");
  return std::clamp(sxy.Value() / std::sqrt(sxx.Value() * syy.Value()), -1.0, 1.0);
}

WelchResult WelchTTest(const std::vector<double> &a, const std::vector<double> &b) {
  if (a.size() < 2 || b.size() < 2) throw ConfigError("t-test: each sample needs >= 2 values");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = Mean(a), mb = Mean(b);
  const double va = SampleVariance(a, ma) / na, vb = SampleVariance(b, mb) / nb;
  if (va == 0.0 && vb == 0.0) throw ConfigError("t-test: both samples have zero variance");
  WelchResult r;
  const double se2 = va + vb;
  r.t = (ma - mb) / std::sqrt(se2);
  r.dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  if (r.t == 0.0) {
    r.p_value = 1.0;
  } else {
    boost::math::students_t dist(r.dof);
    r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  }
  return r;
}

}  // namespace spinlab
