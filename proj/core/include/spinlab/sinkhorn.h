// core/include/spinlab/sinkhorn.h

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

#ifndef SPINLAB_SINKHORN_H_
#define SPINLAB_SINKHORN_H_

#include <iosfwd>
#include <vector>

#include "spinlab/model.h"
#include "spinlab/types.h"

namespace spinlab {

enum class SinkhornMode { kFixedIterations, kConvergeToTol };

struct SinkhornConfig {
  double epsilon = 0.02;
  int n_iters = 3;
  SinkhornMode mode = SinkhornMode::kFixedIterations;
  double tol = 1e-9;
  int max_iters = 100000;  // cap for kConvergeToTol

  void Validate() const;
};

/// Marginal violations of the (pre-rescale) transport plan after each
/// round. row_violation is measured after the column step, col_violation
/// after the row step.
struct SinkhornIterate {
  int iteration = 0;
  double row_violation = 0.0;
  double col_violation = 0.0;
};

struct SinkhornResult {
  /// B x K, every row a distribution over codewords (plan rescaled by B).
  AssignmentMatrix targets;
  int iterations = 0;
  /// max_k |sum_b plan(b,k) - 1/K| of the returned plan; rows are exact.
  /// NaN in fixed-iteration mode unless a trace was requested.
  double max_violation = 0.0;
  std::vector<SinkhornIterate> trace;
};

/// Entropy-regularised balanced assignment over the transportation polytope
/// {Q >= 0 : Q 1 = 1/B, Q^T 1 = 1/K}, maximising <Q, S> + epsilon H(Q).
/// Log-domain alternating column/row scaling; every round ends with a row
/// step so the returned targets are exactly row-stochastic.
SinkhornResult SinkhornLogDomain(const Matrix &scores, const SinkhornConfig &config,
                                 bool record_trace = false);

/// Q* for a batch: scores z_b . c_k, then SinkhornLogDomain. Constants
/// only; nothing downstream differentiates through this.
AssignmentMatrix SmoothTargets(const FrameMatrix &Z, const Codebook &codebook,
                               const SinkhornConfig &config);

/// Converged reference: iterates until the column violation drops below
/// tol. Throws NumericError (with the achieved violation) at the cap.
SinkhornResult SinkhornExact(const Matrix &scores, double epsilon, double tol,
                             int max_iters = 100000);

/// One-hot targets at argmax_k z_b . c_k (the epsilon -> 0, row-only
/// ablation that permits collapse). Ties go to the lowest index.
AssignmentMatrix ArgmaxTargets(const FrameMatrix &Z, const Codebook &codebook);

/// <Q, S> + epsilon H(Q) for a plan Q (not rescaled).
double EntropicObjective(const Matrix &plan, const Matrix &scores, double epsilon);

/// "iteration,row_violation,col_violation" CSV.
void WriteSinkhornTraceCsv(std::ostream &os, const std::vector<SinkhornIterate> &trace);

}  // namespace spinlab

#endif  // SPINLAB_SINKHORN_H_
