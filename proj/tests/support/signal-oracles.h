// tests/support/signal-oracles.h

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

#ifndef SPINLAB_TESTS_SIGNAL_ORACLES_H_
#define SPINLAB_TESTS_SIGNAL_ORACLES_H_

// Independent measurement helpers for perturbation tests: a harmonic vowel
// synthesiser, an envelope peak picker and an autocorrelation pitch tracker.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "spinlab/types.h"

namespace spinlab::testing {

// Harmonic source at f0 whose harmonic amplitudes follow a sum of Gaussian
// bumps of width sigma_hz centred on `formants_hz`.
inline Waveform SynthVowel(const std::vector<double> &formants_hz, double sigma_hz, double f0,
                           double seconds) {
  const size_t n = static_cast<size_t>(seconds * kSampleRate);
  std::vector<double> x(n, 0.0);
  for (int h = 1; h * f0 < 7900.0; ++h) {
    const double f = h * f0;
    double amp = 0.01;
    for (double F : formants_hz) amp += std::exp(-0.5 * (f - F) * (f - F) / (sigma_hz * sigma_hz));
    const double w = 2.0 * std::numbers::pi * f / kSampleRate;
    for (size_t i = 0; i < n; ++i) x[i] += amp * std::sin(w * i + 0.7 * h);
  }
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  Waveform out(n);
  for (size_t i = 0; i < n; ++i) out[i] = static_cast<float>(0.5 * x[i] / peak);
  return out;
}

// Magnitude spectrum of a Hann-windowed segment centred in `wave`.
inline std::vector<double> CentreSpectrum(const Waveform &wave, int fft_size) {
  std::vector<double> frame(fft_size, 0.0);
  const size_t start = wave.size() > static_cast<size_t>(fft_size)
                           ? (wave.size() - fft_size) / 2
                           : 0;
  for (int i = 0; i < fft_size && start + i < wave.size(); ++i)
    frame[i] = wave[start + i] * (0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / fft_size));
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, frame);
  std::vector<double> mag(spec.size());
  for (size_t k = 0; k < spec.size(); ++k) mag[k] = std::abs(spec[k]);
  return mag;
}

// Envelope peak near `guess_hz`: samples the envelope at the harmonics of
// f0, takes the largest harmonic within +-25% of the guess and refines it
// with a parabola through the log amplitudes of it and its neighbours.
inline double EnvelopePeak(const Waveform &wave, double f0, double guess_hz) {
  const int N = 16384;
  const std::vector<double> mag = CentreSpectrum(wave, N);
  auto harmonic_amp = [&](int h) {
    const double bin = h * f0 * N / kSampleRate;
    const int lo = static_cast<int>(std::floor(bin)) - 2, hi = static_cast<int>(std::ceil(bin)) + 2;
    double best = 1e-12;
    for (int k = std::max(lo, 0); k <= hi && k < static_cast<int>(mag.size()); ++k)
      best = std::max(best, mag[k]);
    return std::log(best);
  };
  int best_h = 1;
  double best_a = -1e300;
  for (int h = 1; h * f0 < 7900.0; ++h) {
    const double f = h * f0;
    if (f < 0.75 * guess_hz || f > 1.25 * guess_hz) continue;
    const double a = harmonic_amp(h);
    if (a > best_a) {
      best_a = a;
      best_h = h;
    }
  }
  if (best_h < 2) return best_h * f0;
  const double l = harmonic_amp(best_h - 1), c = best_a, r = harmonic_amp(best_h + 1);
  const double denom = l - 2.0 * c + r;
  const double offset = denom < 0.0 ? 0.5 * (l - r) / denom : 0.0;
  return (best_h + std::clamp(offset, -1.0, 1.0)) * f0;
}

// Autocorrelation pitch estimate (Hz) of the central 100 ms, with parabolic
// refinement of the lag, searching f0 in [f_lo, f_hi].
inline double AutocorrelationF0(const Waveform &wave, double f_lo = 60.0, double f_hi = 500.0) {
  const size_t len = 1600;
  const size_t start = (wave.size() - len) / 2;
  const int min_lag = static_cast<int>(kSampleRate / f_hi);
  const int max_lag = static_cast<int>(kSampleRate / f_lo);
  std::vector<double> r(max_lag + 2, 0.0);
  for (int lag = 0; lag <= max_lag + 1; ++lag) {
    double s = 0.0;
    for (size_t i = 0; i < len; ++i) s += double(wave[start + i]) * wave[start + i + lag];
    r[lag] = s;
  }
  // First lag whose normalised autocorrelation clears 0.8 of the global
  // maximum avoids octave errors towards long lags.
  double global = 0.0;
  for (int lag = min_lag; lag <= max_lag; ++lag) global = std::max(global, r[lag]);
  int best = min_lag;
  for (int lag = min_lag + 1; lag < max_lag; ++lag)
    if (r[lag] >= 0.8 * global && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
      best = lag;
      break;
    }
  const double l = r[best - 1], c = r[best], rr = r[best + 1];
  const double denom = l - 2.0 * c + rr;
  const double offset = denom < 0.0 ? 0.5 * (l - rr) / denom : 0.0;
  return kSampleRate / (best + offset);
}

// Energy of (got - want) relative to want, in dB; -inf for an exact match.
inline double RelativeErrorDb(const Waveform &got, const Waveform &want) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < want.size(); ++i) {
    const double d = double(got[i]) - want[i];
    num += d * d;
    den += double(want[i]) * want[i];
  }
  if (num == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

}  // namespace spinlab::testing

#endif  // SPINLAB_TESTS_SIGNAL_ORACLES_H_
