// core/src/abx.cc

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

#include "spinlab/abx.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <tuple>

namespace spinlab {

std::vector<AbxToken> ExtractTokens(const CorpusManifest &corpus, int min_frames) {
  std::vector<AbxToken> tokens;
  for (size_t u = 0; u < corpus.utterances.size(); ++u) {
    const auto &labels = corpus.utterances[u].labels;
    size_t start = 0;
    for (size_t t = 1; t <= labels.size(); ++t) {
      if (t == labels.size() || labels[t] != labels[start]) {
        const int64_t len = static_cast<int64_t>(t - start);
        if (len >= min_frames)
          tokens.push_back({labels[start], corpus.utterances[u].speaker, u,
                            static_cast<int64_t>(start), len});
        start = t;
      }
    }
  }
  return tokens;
}

AbxTask BuildAbxTask(const CorpusManifest &corpus, const AbxTaskOptions &options) {
  if (options.triples_per_regime < 1)
    throw ConfigError("abx: triples_per_regime must be >= 1");
  AbxTask task;
  task.tokens = ExtractTokens(corpus, options.min_token_frames);
  if (task.tokens.empty()) throw DataError("abx: corpus has no tokens");

  // by_cell[speaker][phone] -> token indices.
  const int S = static_cast<int>(corpus.speakers.size());
  const int I = static_cast<int>(corpus.phones.size());
  std::vector<std::vector<std::vector<size_t>>> by_cell(S, std::vector<std::vector<size_t>>(I));
  for (size_t i = 0; i < task.tokens.size(); ++i)
    by_cell[task.tokens[i].speaker][task.tokens[i].phone].push_back(i);

  // Eligible within cells: (s, a, b) with >= 2 tokens of a and >= 1 of b.
  // Eligible across cells: (s, s2, a, b) with a, b from s and a from s2.
  std::vector<std::tuple<int, int, int>> within;
  std::vector<std::tuple<int, int, int, int>> across;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < I; ++a) {
      if (by_cell[s][a].empty()) continue;
      for (int b = 0; b < I; ++b) {
        if (b == a || by_cell[s][b].empty()) continue;
        if (by_cell[s][a].size() >= 2) within.emplace_back(s, a, b);
        for (int s2 = 0; s2 < S; ++s2)
          if (s2 != s && !by_cell[s2][a].empty()) across.emplace_back(s, s2, a, b);
      }
    }
  if (within.empty() && across.empty())
    throw DataError("abx: no eligible (speaker, phone pair) cells; need two phones per speaker");

  std::mt19937_64 rng(options.seed);
  auto pick = [&rng](const std::vector<size_t> &v) {
    return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)];
  };
  if (!within.empty()) {
    std::uniform_int_distribution<size_t> cell(0, within.size() - 1);
    for (int n = 0; n < options.triples_per_regime; ++n) {
      const auto [s, a, b] = within[cell(rng)];
      const auto &as = by_cell[s][a];
      const size_t ia = std::uniform_int_distribution<size_t>(0, as.size() - 1)(rng);
      size_t ix = std::uniform_int_distribution<size_t>(0, as.size() - 2)(rng);
      if (ix >= ia) ++ix;
      task.triples.push_back({as[ia], pick(by_cell[s][b]), as[ix], AbxRegime::kWithin});
    }
  }
  if (!across.empty()) {
    std::uniform_int_distribution<size_t> cell(0, across.size() - 1);
    for (int n = 0; n < options.triples_per_regime; ++n) {
      const auto [s, s2, a, b] = across[cell(rng)];
      task.triples.push_back({pick(by_cell[s][a]), pick(by_cell[s][b]), pick(by_cell[s2][a]),
                              AbxRegime::kAcross});
    }
  }
  return task;
}

double DtwAngularDistance(const Matrix &a, const Matrix &b) {
  if (a.rows() == 0 || b.rows() == 0) throw DataError("abx: empty token");
  if (a.cols() != b.cols()) throw ConfigError("abx: token feature widths differ");
  const Eigen::Index n = a.rows(), m = b.rows();
  Matrix an = a, bn = b;
  std::vector<bool> a_zero(n), b_zero(m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = an.row(i).norm();
    a_zero[i] = !(s > 0.0);
    if (!a_zero[i]) an.row(i) /= s;
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double s = bn.row(j).norm();
    b_zero[j] = !(s > 0.0);
    if (!b_zero[j]) bn.row(j) /= s;
  }
  const Matrix cosines = an * bn.transpose();
  auto dist = [&](Eigen::Index i, Eigen::Index j) {
    if (a_zero[i] || b_zero[j]) return 0.5;
    return std::acos(std::clamp(cosines(i, j), -1.0, 1.0)) / std::numbers::pi;
  };

  // cost(i, j) = minimal accumulated distance; len(i, j) = steps on that path.
  const double inf = std::numeric_limits<double>::infinity();
  Matrix cost = Matrix::Constant(n, m, inf);
  Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> len(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = dist(i, j);
      if (i == 0 && j == 0) {
        cost(0, 0) = d;
        len(0, 0) = 1;
        continue;
      }
      double best = inf;
      int64_t best_len = 0;
      auto consider = [&](Eigen::Index pi, Eigen::Index pj) {
        if (pi < 0 || pj < 0) return;
        if (cost(pi, pj) < best) {
          best = cost(pi, pj);
          best_len = len(pi, pj);
        }
      };
      consider(i - 1, j - 1);
      consider(i - 1, j);
      consider(i, j - 1);
      cost(i, j) = best + d;
      len(i, j) = best_len + 1;
    }
  }
  return cost(n - 1, m - 1) / static_cast<double>(len(n - 1, m - 1));
}

AbxResult AbxError(const std::vector<Matrix> &token_features, const AbxTask &task) {
  if (task.triples.empty()) throw ConfigError("abx: empty task");
  if (token_features.size() != task.tokens.size())
    throw ConfigError("abx: feature count does not match the token inventory");
  // (regime, phone A, phone B) -> (sum of scores, count).
  std::map<std::tuple<int, int, int>, std::pair<double, int64_t>> cells;
  AbxResult r;
  for (const auto &t : task.triples) {
    const double dax = DtwAngularDistance(token_features[t.a], token_features[t.x]);
    const double dbx = DtwAngularDistance(token_features[t.b], token_features[t.x]);
    const double score = dax > dbx ? 1.0 : (dax == dbx ? 0.5 : 0.0);
    auto &cell = cells[{static_cast<int>(t.regime), task.tokens[t.a].phone,
                        task.tokens[t.b].phone}];
    cell.first += score;
    ++cell.second;
    (t.regime == AbxRegime::kWithin ? r.n_within : r.n_across) += 1;
  }
  CompensatedSum sums[2];
  int64_t n_cells[2] = {0, 0};
  for (const auto &[key, value] : cells) {
    const int regime = std::get<0>(key);
    sums[regime].Add(value.first / static_cast<double>(value.second));
    ++n_cells[regime];
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.within = n_cells[0] ? sums[0].Value() / n_cells[0] : nan;
  r.across = n_cells[1] ? sums[1].Value() / n_cells[1] : nan;
  return r;
}

std::vector<Matrix> TokenFeatures(const std::vector<FrameMatrix> &utterance_features,
                                  const std::vector<AbxToken> &tokens) {
  std::vector<Matrix> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    const FrameMatrix &f = utterance_features.at(t.utterance);
    if (t.start + t.length > f.rows())
      throw DataError("abx: token extends past the end of its utterance features");
    out.push_back(f.middleRows(t.start, t.length));
  }
  return out;
}

}  // namespace spinlab
