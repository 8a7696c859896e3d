// core/include/spinlab/abx.h

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

#ifndef SPINLAB_ABX_H_
#define SPINLAB_ABX_H_

#include <cstdint>
#include <vector>

#include "spinlab/corpus.h"
#include "spinlab/types.h"

namespace spinlab {

/// One phone occurrence: a maximal run of equal labels in an utterance.
struct AbxToken {
  int phone = 0;
  int speaker = 0;
  size_t utterance = 0;
  int64_t start = 0;  // first frame within the utterance
  int64_t length = 0;
};

enum class AbxRegime { kWithin = 0, kAcross = 1 };

struct AbxTriple {
  size_t a = 0, b = 0, x = 0;  // token indices
  AbxRegime regime = AbxRegime::kWithin;
};

/// Triples over a token inventory. A and X share a phone and B does not.
/// Within: all three from one speaker. Across: A and B from one speaker,
/// X from another.
struct AbxTask {
  std::vector<AbxToken> tokens;
  std::vector<AbxTriple> triples;
};

struct AbxTaskOptions {
  int triples_per_regime = 2000;
  int min_token_frames = 1;
  uint64_t seed = 0;
};

/// Tokens from the manifest's label runs.
std::vector<AbxToken> ExtractTokens(const CorpusManifest &corpus, int min_frames = 1);

/// Samples triples uniformly over eligible (speaker, phone-pair) cells and
/// then tokens within the cell. Throws DataError if neither regime has an
/// eligible cell.
AbxTask BuildAbxTask(const CorpusManifest &corpus, const AbxTaskOptions &options = {});

/// Mean angular distance (arccos(cos) / pi) along the minimum-cost DTW
/// path. Zero-norm frames are treated as orthogonal to everything.
double DtwAngularDistance(const Matrix &a, const Matrix &b);

struct AbxResult {
  double within = 0.0;  // NaN when the task has no within triples
  double across = 0.0;  // NaN when the task has no across triples
  int64_t n_within = 0;
  int64_t n_across = 0;
};

/// Error 1 if d(A,X) > d(B,X), 0.5 on ties, else 0; averaged per ordered
/// (phone of A, phone of B) pair within a regime, then macro-averaged over
/// pairs. `token_features[i]` holds the frames of task.tokens[i].
AbxResult AbxError(const std::vector<Matrix> &token_features, const AbxTask &task);

/// Slices per-utterance features into per-token matrices.
std::vector<Matrix> TokenFeatures(const std::vector<FrameMatrix> &utterance_features,
                                  const std::vector<AbxToken> &tokens);

}  // namespace spinlab

#endif  // SPINLAB_ABX_H_
