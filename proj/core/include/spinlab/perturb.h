// core/include/spinlab/perturb.h

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

#ifndef SPINLAB_PERTURB_H_
#define SPINLAB_PERTURB_H_

#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlab/corpus.h"
#include "spinlab/types.h"

namespace spinlab {

struct EqBand {
  double center_hz = 1000.0;
  double bandwidth_hz = 500.0;
  double gain_db = 0.0;
};

/// One draw of the speaker perturbation.
struct PerturbParams {
  double formant_ratio = 1.0;
  double f0_ratio = 1.0;
  std::vector<EqBand> peaks;
  double low_shelf_db = 0.0;
  double high_shelf_db = 0.0;

  /// Ratios in [1/2, 2], |gain| <= 12 dB, centres strictly increasing in
  /// (0, 8000) Hz.
  void Validate() const;
};

void to_json(nlohmann::json &j, const PerturbParams &p);
void from_json(const nlohmann::json &j, PerturbParams &p);

struct PerturbConfig {
  double formant_hi = 1.4;
  double f0_hi = 2.0;
  double invert_prob = 0.5;
  int n_eq_peaks = 8;
  double eq_gain_db = 12.0;
  double eq_q = 1.5;
  uint64_t seed = 0;

  void Validate() const;
};

void to_json(nlohmann::json &j, const PerturbConfig &c);
void from_json(const nlohmann::json &j, PerturbConfig &c);

inline constexpr double kLowShelfHz = 60.0;
inline constexpr double kHighShelfHz = 6000.0;

/// formant_ratio ~ U(1, formant_hi), inverted with probability invert_prob;
/// f0_ratio likewise; EQ gains uniform in [-eq_gain_db, eq_gain_db] at fixed
/// log-spaced centres.
PerturbParams SamplePerturbParams(const PerturbConfig &config, std::mt19937_64 *rng);

/// Analysis geometry of the waveform perturbation.
struct VocoderConfig {
  int fft_size = 1024;
  int hop = 256;
  int lifter_cutoff = 20;  // 1.25 ms at 16 kHz
  /// Lifter the harmonic-peak hull instead of the raw log spectrum, so the
  /// envelope rests on the harmonics rather than averaging peaks and valleys.
  bool peak_hull = true;
  /// In voiced frames the cutoff is raised to this multiple of the detected
  /// pitch period (the hull carries no harmonic ripple to remove); 0 keeps
  /// lifter_cutoff everywhere.
  double pitch_adaptive_factor = 1.0;
};

/// Formant warp + pitch shift + EQ on 16 kHz mono audio. The output has
/// exactly as many samples as the input.
Waveform PerturbWaveform(std::span<const float> wave, int sample_rate,
                         const PerturbParams &params,
                         const VocoderConfig &vocoder = {});

/// Applies only the EQ cascade (peaking filters then shelves).
Waveform ApplyEqualizer(std::span<const float> wave, int sample_rate,
                        const PerturbParams &params);

/// Log-magnitude curve through the local maxima of `log_magnitude`, using
/// the average of the two neighbouring three-peak parabolas between peaks
/// (exact on log-parabolic formant shapes). Constant beyond the outer peaks.
std::vector<double> PeakHull(std::span<const double> log_magnitude);

/// Cepstrally smoothed magnitude envelope of one frame's half spectrum,
/// optionally computed from the harmonic-peak hull.
std::vector<double> CepstralEnvelope(std::span<const double> magnitude,
                                     int fft_size, int lifter_cutoff,
                                     bool peak_hull = false);

/// Pitch period in samples from the real-cepstrum peak between 60 and
/// 500 Hz, or 0 when no clear peak exists.
int CepstralPitchPeriod(std::span<const double> magnitude, int fft_size, int sample_rate);

/// Feature-level counterpart: re-renders a synthetic utterance under
/// `voice_out`. Throws DataError if `features` are not consistent with
/// rendering `labels` under `voice_in` (noise-free residual beyond the
/// corpus noise level).
FrameMatrix PerturbSynthetic(const SyntheticWorld &world, const FrameMatrix &features,
                             const std::vector<int> &labels,
                             const SpeakerTransform &voice_in,
                             const SpeakerTransform &voice_out, std::mt19937_64 *rng);

/// The voice obtained by applying `params` to `voice`.
SpeakerTransform ApplyToVoice(const SpeakerTransform &voice, const PerturbParams &params);

}  // namespace spinlab

#endif  // SPINLAB_PERTURB_H_
