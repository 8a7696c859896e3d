// core/include/spinlab/probe.h

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

#ifndef SPINLAB_PROBE_H_
#define SPINLAB_PROBE_H_

#include <cstdint>
#include <vector>

#include "spinlab/types.h"

namespace spinlab {

struct ProbeOptions {
  double train_fraction = 0.8;
  /// Ridge penalty on the weights (not the biases); keeps separable
  /// problems from drifting to infinite weights.
  double l2 = 1e-4;
  /// Stop when the training loss changes by less than this.
  double tol = 1e-6;
  int max_iters = 1000;
  int memory = 10;  // L-BFGS history
};

struct ProbeResult {
  double accuracy = 0.0;  // held-out frame accuracy
  double train_loss = 0.0;
  int iterations = 0;
  int64_t n_train = 0, n_test = 0;
  int n_classes = 0;
};

/// Multinomial logistic regression on an 80/20 frame split drawn with
/// `split_seed`. Features are standardised with train-split statistics.
/// Throws DataError for a single class or too few frames.
ProbeResult SpeakerProbe(const Matrix &features, const std::vector<int> &labels,
                         uint64_t split_seed, const ProbeOptions &options = {});

}  // namespace spinlab

#endif  // SPINLAB_PROBE_H_
