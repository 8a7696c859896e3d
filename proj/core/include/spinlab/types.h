// core/include/spinlab/types.h

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

#ifndef SPINLAB_TYPES_H_
#define SPINLAB_TYPES_H_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinlab {

/// Row-major so that one frame is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// B x D per-frame representations.
using FrameMatrix = Matrix;
/// B x K row-stochastic code distributions.
using AssignmentMatrix = Matrix;

/// Mono PCM samples scaled to [-1, 1].
using Waveform = std::vector<float>;

inline constexpr int kSampleRate = 16000;
inline constexpr double kFrameRate = 50.0;
inline constexpr int kHopSamples = 320;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, spec, or parameter block. The CLI maps this to
/// exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (manifests, audio, dumps).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure during an algorithm (non-finite values, no convergence).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Sum with Neumaier compensation. Used where reduction order must not move
/// the result by more than a few ulps.
class CompensatedSum {
 public:
  void Add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double Value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Throws NumericError if any entry is NaN or infinite.
void CheckFinite(const Matrix &m, const std::string &what);

/// Writes "WARNING (spinlab): msg" to the installed sink (stderr by default).
void Warn(const std::string &msg);
/// Replaces the warning sink; pass nullptr to restore stderr.
void SetWarningSink(void (*sink)(const std::string &));

/// Number of frames for a duration at the fixed 50 Hz frame rate.
int64_t FramesForDuration(double duration_s, double frame_rate = kFrameRate);

}  // namespace spinlab

#endif  // SPINLAB_TYPES_H_
