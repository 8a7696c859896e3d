// core/include/spinlab/metrics.h

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

#ifndef SPINLAB_METRICS_H_
#define SPINLAB_METRICS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spinlab/types.h"

namespace spinlab {

/// Joint phone/code frame counts.
class ContingencyTable {
 public:
  using Counts = Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  ContingencyTable() = default;
  /// Throws ConfigError on negative entries or an all-zero table.
  explicit ContingencyTable(Counts counts);

  const Counts &counts() const { return counts_; }
  int n_phones() const { return static_cast<int>(counts_.rows()); }
  int n_codes() const { return static_cast<int>(counts_.cols()); }
  int64_t total() const { return total_; }
  const std::vector<int64_t> &phone_totals() const { return phone_totals_; }
  const std::vector<int64_t> &code_totals() const { return code_totals_; }

 private:
  Counts counts_;
  int64_t total_ = 0;
  std::vector<int64_t> phone_totals_, code_totals_;
};

/// counts(i, k) = number of frames with phone i and code k. The table has
/// n_phones rows and K columns; both are inferred from the data when <= 0.
ContingencyTable Contingency(const std::vector<int> &code_ids,
                             const std::vector<int> &phone_labels, int n_phones = 0,
                             int K = 0);

struct PurityMetrics {
  double cluster_purity = 0.0;
  double phone_purity = 0.0;
  double pnmi = 0.0;
};

/// Purity and phone-normalised mutual information (nats, 0 log 0 = 0).
/// Throws DataError("PNMI undefined ...") when only one phone occurs.
PurityMetrics ComputePurityMetrics(const ContingencyTable &table);

struct CodePhoneHeatmap {
  /// P(phone | code), rows ordered by descending phone frequency.
  Matrix probabilities;
  /// phone_order[r] = original phone index shown in row r.
  std::vector<int> phone_order;
  /// Codes with no frames; their columns are all zero.
  std::vector<int> unused_codes;
};

CodePhoneHeatmap CodePhoneHeatmapFromTable(const ContingencyTable &table);

}  // namespace spinlab

#endif  // SPINLAB_METRICS_H_
