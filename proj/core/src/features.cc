// core/src/features.cc

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

#include "spinlab/features.h"

#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace spinlab {

void FeatureConfig::Validate() const {
  if (sample_rate <= 0) throw ConfigError("features: sample_rate must be > 0");
  if (window_samples <= 0 || hop_samples <= 0)
    throw ConfigError("features: window and hop must be > 0");
  if (fft_size < window_samples)
    throw ConfigError("features: fft_size must be >= window_samples");
  if (n_mels < 1) throw ConfigError("features: n_mels must be >= 1");
  if (!(fmin_hz >= 0.0 && fmax_hz > fmin_hz && fmax_hz <= sample_rate / 2.0))
    throw ConfigError("features: need 0 <= fmin < fmax <= sample_rate/2");
  if (!(variance_floor > 0.0)) throw ConfigError("features: variance_floor must be > 0");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> MelBandCenters(const FeatureConfig &config) {
  const double lo = HzToMel(config.fmin_hz), hi = HzToMel(config.fmax_hz);
  std::vector<double> centers(config.n_mels);
  for (int m = 0; m < config.n_mels; ++m)
    centers[m] = MelToHz(lo + (hi - lo) * (m + 1) / (config.n_mels + 1));
  return centers;
}

Matrix MelFilterbank(const FeatureConfig &config) {
  const int n_bins = config.fft_size / 2 + 1;
  const double lo = HzToMel(config.fmin_hz), hi = HzToMel(config.fmax_hz);
  std::vector<double> edges(config.n_mels + 2);
  for (int i = 0; i < config.n_mels + 2; ++i)
    edges[i] = lo + (hi - lo) * i / (config.n_mels + 1);
  Matrix fb = Matrix::Zero(config.n_mels, n_bins);
  for (int k = 0; k < n_bins; ++k) {
    const double mel =
        HzToMel(static_cast<double>(k) * config.sample_rate / config.fft_size);
    for (int m = 0; m < config.n_mels; ++m) {
      const double l = edges[m], c = edges[m + 1], r = edges[m + 2];
      if (mel > l && mel < r)
        fb(m, k) = mel <= c ? (mel - l) / (c - l) : (r - mel) / (r - c);
    }
  }
  return fb;
}

Matrix PowerSpectrogram(std::span<const float> wave, const FeatureConfig &config) {
  config.Validate();
  const int64_t n = static_cast<int64_t>(wave.size());
  if (n < config.window_samples)
    throw DataError("waveform shorter than one analysis window (" +
                    std::to_string(n) + " < " +
                    std::to_string(config.window_samples) + " samples)");
  const int64_t n_frames = n / config.hop_samples;
  const int n_bins = config.fft_size / 2 + 1;

  std::vector<double> window(config.window_samples);
  for (int i = 0; i < config.window_samples; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i /
                                     config.window_samples);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> buf(config.fft_size);
  std::vector<std::complex<double>> spec;
  Matrix power(n_frames, n_bins);
  for (int64_t t = 0; t < n_frames; ++t) {
    const int64_t start = t * config.hop_samples + config.hop_samples / 2 -
                          config.window_samples / 2;
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < config.window_samples; ++i) {
      const int64_t s = start + i;
      if (s >= 0 && s < n) buf[i] = window[i] * wave[s];
    }
    fft.fwd(spec, buf);
    for (int k = 0; k < n_bins; ++k) power(t, k) = std::norm(spec[k]);
  }
  return power;
}

void NormalizeMeanVariance(FrameMatrix *frames, double variance_floor) {
  if (frames->rows() == 0) return;
  const RowVector mean = frames->colwise().mean();
  frames->rowwise() -= mean;
  const RowVector var = frames->colwise().squaredNorm() / frames->rows();
  for (Eigen::Index c = 0; c < frames->cols(); ++c)
    frames->col(c) /= std::sqrt(std::max(var(c), variance_floor));
}

FrameMatrix ExtractFeatures(std::span<const float> wave,
                            const FeatureConfig &config) {
  const Matrix power = PowerSpectrogram(wave, config);
  const Matrix fb = MelFilterbank(config);
  FrameMatrix feats = power * fb.transpose();
  feats = feats.array().max(config.energy_floor).log().matrix();
  if (config.normalize) NormalizeMeanVariance(&feats, config.variance_floor);
  return feats;
}

}  // namespace spinlab
