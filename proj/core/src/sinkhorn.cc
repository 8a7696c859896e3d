// core/src/sinkhorn.cc

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

#include "spinlab/sinkhorn.h"

#include <cmath>
#include <limits>
#include <ostream>

namespace spinlab {

void SinkhornConfig::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ConfigError("sinkhorn: epsilon must be > 0");
  if (n_iters < 1) throw ConfigError("sinkhorn: n_iters must be >= 1");
  if (mode == SinkhornMode::kConvergeToTol && !(tol > 0.0))
    throw ConfigError("sinkhorn: tol must be > 0");
  if (max_iters < 1) throw ConfigError("sinkhorn: max_iters must be >= 1");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-column log-sum-exp of (log_kernel(b, k) + u(b)), compensated.
void ColumnLogSumExp(const Matrix &log_kernel, const Vector &u, Vector *out) {
  const Eigen::Index B = log_kernel.rows(), K = log_kernel.cols();
  Vector m = Vector::Constant(K, kNegInf);
  for (Eigen::Index b = 0; b < B; ++b) {
    const double *row = log_kernel.data() + b * K;
    const double ub = u(b);
    for (Eigen::Index k = 0; k < K; ++k) m(k) = std::max(m(k), row[k] + ub);
  }
  Vector sum = Vector::Zero(K), comp = Vector::Zero(K);
  for (Eigen::Index b = 0; b < B; ++b) {
    const double *row = log_kernel.data() + b * K;
    const double ub = u(b);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double x = std::exp(row[k] + ub - m(k));
      const double t = sum(k) + x;
      // sum >= 0 and x >= 0, so Neumaier reduces to this branch-free form.
      comp(k) += sum(k) >= x ? (sum(k) - t) + x : (x - t) + sum(k);
      sum(k) = t;
    }
  }
  *out = m.array() + (sum + comp).array().log();
}

double RowLogSumExp(const double *row, const Vector &v) {
  const Eigen::Index K = v.size();
  double m = kNegInf;
  for (Eigen::Index k = 0; k < K; ++k) m = std::max(m, row[k] + v(k));
  CompensatedSum s;
  for (Eigen::Index k = 0; k < K; ++k) s.Add(std::exp(row[k] + v(k) - m));
  return m + std::log(s.Value());
}

}  // namespace

SinkhornResult SinkhornLogDomain(const Matrix &scores, const SinkhornConfig &config,
                                 bool record_trace) {
  config.Validate();
  const Eigen::Index B = scores.rows(), K = scores.cols();
  if (K == 0) throw ConfigError("sinkhorn: K must be > 0");
  if (B == 0) throw ConfigError("sinkhorn: empty batch");
  CheckFinite(scores, "sinkhorn score matrix");

  const Matrix log_kernel = scores / config.epsilon;
  CheckFinite(log_kernel, "sinkhorn log-kernel");
  const double log_row = -std::log(static_cast<double>(B));
  const double log_col = -std::log(static_cast<double>(K));
  const bool converge = config.mode == SinkhornMode::kConvergeToTol;
  const int cap = converge ? config.max_iters : config.n_iters;

  Vector u = Vector::Zero(B), v = Vector::Zero(K), col_lse(K);
  SinkhornResult result;
  int it = 0;
  for (; it < cap; ++it) {
    ColumnLogSumExp(log_kernel, u, &col_lse);
    if (it > 0) {
      // Column marginals of the current plan, whose rows are exact.
      double viol = 0.0;
      for (Eigen::Index k = 0; k < K; ++k)
        viol = std::max(viol, std::abs(std::exp(col_lse(k) + v(k)) - 1.0 / K));
      result.max_violation = viol;
      if (record_trace && !result.trace.empty()) result.trace.back().col_violation = viol;
      if (converge && viol < config.tol) break;
    }
    v = log_col - col_lse.array();

    double row_viol = 0.0;
    for (Eigen::Index b = 0; b < B; ++b) {
      const double lse = RowLogSumExp(log_kernel.data() + b * K, v);
      if (record_trace) row_viol = std::max(row_viol, std::abs(std::exp(lse + u(b)) - 1.0 / B));
      u(b) = log_row - lse;
    }
    if (record_trace) result.trace.push_back({it + 1, row_viol, 0.0});
  }
  if (converge ? it == cap : record_trace) {
    // Loop ran out: measure the final plan's column violation.
    ColumnLogSumExp(log_kernel, u, &col_lse);
    double viol = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
      viol = std::max(viol, std::abs(std::exp(col_lse(k) + v(k)) - 1.0 / K));
    result.max_violation = viol;
    if (record_trace && !result.trace.empty()) result.trace.back().col_violation = viol;
  } else if (!converge) {
    result.max_violation = std::numeric_limits<double>::quiet_NaN();
  }
  result.iterations = it;

  result.targets.resize(B, K);
  for (Eigen::Index b = 0; b < B; ++b) {
    const double *row = log_kernel.data() + b * K;
    double *out = result.targets.data() + b * K;
    CompensatedSum s;
    for (Eigen::Index k = 0; k < K; ++k) {
      out[k] = std::exp(row[k] + u(b) + v(k));
      s.Add(out[k]);
    }
    const double total = s.Value();
    for (Eigen::Index k = 0; k < K; ++k) out[k] /= total;
  }
  return result;
}

AssignmentMatrix SmoothTargets(const FrameMatrix &Z, const Codebook &codebook,
                               const SinkhornConfig &config) {
  if (codebook.K() == 0) throw ConfigError("sinkhorn: K must be > 0");
  if (Z.cols() != codebook.D())
    throw ConfigError("sinkhorn: Z width does not match codebook dimension");
  if (Z.rows() < codebook.K())
    Warn("sinkhorn: batch of " + std::to_string(Z.rows()) + " frames is smaller than K = " +
         std::to_string(codebook.K()) + "; balanced targets are poorly determined");
  const Matrix scores = Z * codebook.codewords.transpose();
  return SinkhornLogDomain(scores, config).targets;
}

SinkhornResult SinkhornExact(const Matrix &scores, double epsilon, double tol, int max_iters) {
  SinkhornConfig c;
  c.epsilon = epsilon;
  c.mode = SinkhornMode::kConvergeToTol;
  c.tol = tol;
  c.max_iters = max_iters;
  SinkhornResult r = SinkhornLogDomain(scores, c);
  if (!(r.max_violation < tol))
    throw NumericError("sinkhorn_exact: no convergence after " + std::to_string(r.iterations) +
                       " iterations (column violation " + std::to_string(r.max_violation) +
                       ", tol " + std::to_string(tol) + ")");
  return r;
}

AssignmentMatrix ArgmaxTargets(const FrameMatrix &Z, const Codebook &codebook) {
  if (codebook.K() == 0) throw ConfigError("argmax targets: K must be > 0");
  const Matrix scores = Z * codebook.codewords.transpose();
  AssignmentMatrix q = AssignmentMatrix::Zero(scores.rows(), scores.cols());
  for (Eigen::Index b = 0; b < scores.rows(); ++b) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k)
      if (scores(b, k) > scores(b, best)) best = k;
    q(b, best) = 1.0;
  }
  return q;
}

double EntropicObjective(const Matrix &plan, const Matrix &scores, double epsilon) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < plan.size(); ++i) {
    const double q = plan.data()[i];
    s.Add(q * scores.data()[i]);
    if (q > 0.0) s.Add(-epsilon * q * std::log(q));
  }
  return s.Value();
}

void WriteSinkhornTraceCsv(std::ostream &os, const std::vector<SinkhornIterate> &trace) {
  os << "iteration,row_violation,col_violation\n";
  os.precision(17);
  for (const auto &t : trace)
    os << t.iteration << ',' << t.row_violation << ',' << t.col_violation << '\n';
}

}  // namespace spinlab
