// core/include/spinlab/features.h

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

#ifndef SPINLAB_FEATURES_H_
#define SPINLAB_FEATURES_H_

#include <span>

#include "spinlab/types.h"

namespace spinlab {

/// Log-mel front end. Frame t is centred on sample t*hop + hop/2, so a
/// waveform of n samples yields floor(n / hop) frames (50 per second).
struct FeatureConfig {
  int sample_rate = kSampleRate;
  int window_samples = 400;  // 25 ms
  int hop_samples = kHopSamples;  // 20 ms
  int fft_size = 512;
  int n_mels = 40;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;
  bool normalize = true;
  double variance_floor = 1e-8;
  double energy_floor = 1e-10;

  void Validate() const;
};

double HzToMel(double hz);
double MelToHz(double mel);

/// n_mels x (fft_size/2 + 1) triangular filters on the HTK mel scale.
Matrix MelFilterbank(const FeatureConfig &config);

/// Centre frequency (Hz) of each mel band.
std::vector<double> MelBandCenters(const FeatureConfig &config);

/// Per-frame power spectra (frames x fft_size/2+1) with a Hann window.
Matrix PowerSpectrogram(std::span<const float> wave, const FeatureConfig &config);

/// Log-mel frames, per-utterance mean/variance normalised when
/// config.normalize is set. Throws DataError if the waveform is shorter than
/// one analysis window.
FrameMatrix ExtractFeatures(std::span<const float> wave,
                            const FeatureConfig &config = {});

/// Column-wise mean/variance normalisation with a variance floor.
void NormalizeMeanVariance(FrameMatrix *frames, double variance_floor);

}  // namespace spinlab

#endif  // SPINLAB_FEATURES_H_
