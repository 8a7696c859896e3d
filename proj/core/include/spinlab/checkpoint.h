// core/include/spinlab/checkpoint.h

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

#ifndef SPINLAB_CHECKPOINT_H_
#define SPINLAB_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "spinlab/model.h"

namespace spinlab {

// Binary layout (little-endian):
//   "SPINCKPT" | u32 version | u64 step | u32 K | u32 D | f64 tau |
//   u32 input_dim | u32 hidden_dim | u32 n_layers | u32 n_frozen | u8 use_bias |
//   input_mean, input_scale, per-layer (weight, bias), projection (weight,
//   bias), codewords
// Each matrix is stored as u64 rows, u64 cols, then rows*cols f64 row-major.
inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams params;
  uint64_t step = 0;
  bool operator==(const Checkpoint &o) const { return params == o.params && step == o.step; }
};

std::string SerializeCheckpoint(const Checkpoint &ckpt);
Checkpoint DeserializeCheckpoint(const std::string &blob);

void SaveCheckpoint(const std::filesystem::path &path, const Checkpoint &ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path &path);

}  // namespace spinlab

#endif  // SPINLAB_CHECKPOINT_H_
