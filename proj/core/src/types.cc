// core/src/types.cc

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

#include "spinlab/types.h"

#include <cmath>
#include <iostream>

namespace spinlab {

namespace {
void (*g_warning_sink)(const std::string &) = nullptr;
}  // namespace

void Warn(const std::string &msg) {
  if (g_warning_sink)
    g_warning_sink(msg);
  else
    std::cerr << "WARNING (spinlab): " << msg << "\n";
}

void SetWarningSink(void (*sink)(const std::string &)) { g_warning_sink = sink; }

void CheckFinite(const Matrix &m, const std::string &what) {
  if (!m.allFinite())
    throw NumericError("non-finite entries in " + what);
}

int64_t FramesForDuration(double duration_s, double frame_rate) {
  return static_cast<int64_t>(std::llround(duration_s * frame_rate));
}

}  // namespace spinlab
