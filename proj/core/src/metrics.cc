// core/src/metrics.cc

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

#include "spinlab/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace spinlab {

ContingencyTable::ContingencyTable(Counts counts) : counts_(std::move(counts)) {
  if (counts_.size() == 0) throw ConfigError("contingency table is empty");
  phone_totals_.assign(counts_.rows(), 0);
  code_totals_.assign(counts_.cols(), 0);
  for (Eigen::Index i = 0; i < counts_.rows(); ++i) {
    for (Eigen::Index k = 0; k < counts_.cols(); ++k) {
      const int64_t c = counts_(i, k);
      if (c < 0) throw ConfigError("contingency table has a negative entry");
      phone_totals_[i] += c;
      code_totals_[k] += c;
      total_ += c;
    }
  }
  if (total_ == 0) throw ConfigError("contingency table has no frames");
}

ContingencyTable Contingency(const std::vector<int> &code_ids,
                             const std::vector<int> &phone_labels, int n_phones, int K) {
  if (code_ids.size() != phone_labels.size())
    throw ConfigError("contingency: " + std::to_string(code_ids.size()) + " codes vs " +
                      std::to_string(phone_labels.size()) + " labels");
  if (code_ids.empty()) throw ConfigError("contingency: no frames");
  const int max_phone = *std::max_element(phone_labels.begin(), phone_labels.end());
  const int max_code = *std::max_element(code_ids.begin(), code_ids.end());
  if (n_phones <= 0) n_phones = max_phone + 1;
  if (K <= 0) K = max_code + 1;
  ContingencyTable::Counts counts = ContingencyTable::Counts::Zero(n_phones, K);
  for (size_t t = 0; t < code_ids.size(); ++t) {
    const int i = phone_labels[t], k = code_ids[t];
    if (i < 0 || i >= n_phones)
      throw DataError("contingency: phone label " + std::to_string(i) + " out of range");
    if (k < 0 || k >= K)
      throw DataError("contingency: code id " + std::to_string(k) + " out of range");
    ++counts(i, k);
  }
  return ContingencyTable(std::move(counts));
}

namespace {

double Entropy(const std::vector<int64_t> &totals, double n) {
  CompensatedSum h;
  for (int64_t c : totals)
    if (c > 0) {
      const double p = c / n;
      h.Add(-p * std::log(p));
    }
  return h.Value();
}

}  // namespace

PurityMetrics ComputePurityMetrics(const ContingencyTable &table) {
  const auto &c = table.counts();
  const double n = static_cast<double>(table.total());
  const double h_phone = Entropy(table.phone_totals(), n);
  if (!(h_phone > 0.0))
    throw DataError("PNMI undefined: only one phone occurs in the scored frames");

  PurityMetrics m;
  // Phone purity: sum_k max_i p(i, k). Cluster purity: sum_i max_k p(i, k).
  CompensatedSum phone_pur, cluster_pur, mutual;
  for (Eigen::Index k = 0; k < c.cols(); ++k) phone_pur.Add(c.col(k).maxCoeff() / n);
  for (Eigen::Index i = 0; i < c.rows(); ++i) cluster_pur.Add(c.row(i).maxCoeff() / n);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      if (c(i, k) == 0) continue;
      const double pik = c(i, k) / n;
      const double pi = table.phone_totals()[i] / n, pk = table.code_totals()[k] / n;
      mutual.Add(pik * std::log(pik / (pi * pk)));
    }
  }
  m.phone_purity = phone_pur.Value();
  m.cluster_purity = cluster_pur.Value();
  m.pnmi = std::clamp(mutual.Value() / h_phone, 0.0, 1.0);
  return m;
}

CodePhoneHeatmap CodePhoneHeatmapFromTable(const ContingencyTable &table) {
  CodePhoneHeatmap h;
  const int I = table.n_phones(), K = table.n_codes();
  h.phone_order.resize(I);
  std::iota(h.phone_order.begin(), h.phone_order.end(), 0);
  std::stable_sort(h.phone_order.begin(), h.phone_order.end(), [&](int a, int b) {
    return table.phone_totals()[a] > table.phone_totals()[b];
  });
  h.probabilities = Matrix::Zero(I, K);
  for (int k = 0; k < K; ++k) {
    const int64_t col = table.code_totals()[k];
    if (col == 0) {
      h.unused_codes.push_back(k);
      continue;
    }
    for (int r = 0; r < I; ++r)
      h.probabilities(r, k) =
          static_cast<double>(table.counts()(h.phone_order[r], k)) / static_cast<double>(col);
  }
  return h;
}

}  // namespace spinlab
