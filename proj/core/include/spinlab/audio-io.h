// core/include/spinlab/audio-io.h

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

#ifndef SPINLAB_AUDIO_IO_H_
#define SPINLAB_AUDIO_IO_H_

#include <filesystem>

#include "spinlab/types.h"

namespace spinlab {

/// Reads a RIFF/WAVE file. Only PCM-16, mono, 16 kHz is accepted; anything
/// else throws DataError("unsupported audio format: ...").
Waveform ReadWav(const std::filesystem::path &path);

/// Writes PCM-16 mono at `sample_rate`. Samples are clamped to [-1, 1].
void WriteWav(const std::filesystem::path &path, const Waveform &wave,
              int sample_rate = kSampleRate);

// Feature dumps: 16-byte little-endian header followed by row-major float32.
//   bytes 0..3   magic "SPFM"
//   bytes 4..11  rows (uint64)
//   bytes 12..15 cols (uint32)
inline constexpr char kFeatureDumpMagic[4] = {'S', 'P', 'F', 'M'};

void WriteFeatureDump(const std::filesystem::path &path, const Matrix &m);
Matrix ReadFeatureDump(const std::filesystem::path &path);

}  // namespace spinlab

#endif  // SPINLAB_AUDIO_IO_H_
