// core/src/perturb.cc

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

#include "spinlab/perturb.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace spinlab {

void PerturbParams::Validate() const {
  auto ratio_ok = [](double r) { return std::isfinite(r) && r >= 0.5 && r <= 2.0; };
  if (!ratio_ok(formant_ratio))
    throw ConfigError("perturb params: formant_ratio must lie in [1/2, 2]");
  if (!ratio_ok(f0_ratio)) throw ConfigError("perturb params: f0_ratio must lie in [1/2, 2]");
  double prev = 0.0;
  for (const auto &b : peaks) {
    if (!(b.center_hz > prev && b.center_hz < 8000.0))
      throw ConfigError("perturb params: EQ centres must be strictly increasing in (0, 8000) Hz");
    if (!(b.bandwidth_hz > 0.0)) throw ConfigError("perturb params: EQ bandwidth must be > 0");
    if (!(std::abs(b.gain_db) <= 12.0)) throw ConfigError("perturb params: |EQ gain| must be <= 12 dB");
    prev = b.center_hz;
  }
  if (!(std::abs(low_shelf_db) <= 12.0) || !(std::abs(high_shelf_db) <= 12.0))
    throw ConfigError("perturb params: |shelf gain| must be <= 12 dB");
}

void to_json(nlohmann::json &j, const PerturbParams &p) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto &b : p.peaks)
    peaks.push_back({{"center_hz", b.center_hz},
                     {"bandwidth_hz", b.bandwidth_hz},
                     {"gain_db", b.gain_db}});
  j = {{"formant_ratio", p.formant_ratio},
       {"f0_ratio", p.f0_ratio},
       {"peaks", peaks},
       {"low_shelf_db", p.low_shelf_db},
       {"high_shelf_db", p.high_shelf_db}};
}

void from_json(const nlohmann::json &j, PerturbParams &p) {
  p.formant_ratio = j.at("formant_ratio").get<double>();
  p.f0_ratio = j.at("f0_ratio").get<double>();
  p.peaks.clear();
  for (const auto &b : j.value("peaks", nlohmann::json::array()))
    p.peaks.push_back({b.at("center_hz").get<double>(), b.at("bandwidth_hz").get<double>(),
                       b.at("gain_db").get<double>()});
  p.low_shelf_db = j.value("low_shelf_db", 0.0);
  p.high_shelf_db = j.value("high_shelf_db", 0.0);
}

void PerturbConfig::Validate() const {
  if (!(formant_hi >= 1.0 && formant_hi <= 2.0))
    throw ConfigError("perturb: formant_hi must lie in [1, 2]");
  if (!(f0_hi >= 1.0 && f0_hi <= 2.0)) throw ConfigError("perturb: f0_hi must lie in [1, 2]");
  if (!(invert_prob >= 0.0 && invert_prob <= 1.0))
    throw ConfigError("perturb: invert_prob must lie in [0, 1]");
  if (n_eq_peaks < 0) throw ConfigError("perturb: n_eq_peaks must be >= 0");
  if (!(eq_gain_db >= 0.0 && eq_gain_db <= 12.0))
    throw ConfigError("perturb: eq_gain_db must lie in [0, 12]");
  if (!(eq_q > 0.0)) throw ConfigError("perturb: eq_q must be > 0");
}

void to_json(nlohmann::json &j, const PerturbConfig &c) {
  j = {{"formant_hi", c.formant_hi}, {"f0_hi", c.f0_hi},         {"invert_prob", c.invert_prob},
       {"n_eq_peaks", c.n_eq_peaks}, {"eq_gain_db", c.eq_gain_db}, {"eq_q", c.eq_q},
       {"seed", c.seed}};
}

void from_json(const nlohmann::json &j, PerturbConfig &c) {
  const PerturbConfig d;
  c.formant_hi = j.value("formant_hi", d.formant_hi);
  c.f0_hi = j.value("f0_hi", d.f0_hi);
  c.invert_prob = j.value("invert_prob", d.invert_prob);
  c.n_eq_peaks = j.value("n_eq_peaks", d.n_eq_peaks);
  c.eq_gain_db = j.value("eq_gain_db", d.eq_gain_db);
  c.eq_q = j.value("eq_q", d.eq_q);
  c.seed = j.value("seed", d.seed);
}

PerturbParams SamplePerturbParams(const PerturbConfig &config, std::mt19937_64 *rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_ratio = [&](double hi) {
    double r = 1.0 + (hi - 1.0) * unit(*rng);
    if (unit(*rng) < config.invert_prob) r = 1.0 / r;
    return r;
  };
  PerturbParams p;
  p.formant_ratio = draw_ratio(config.formant_hi);
  p.f0_ratio = draw_ratio(config.f0_hi);
  const double lo = 80.0, hi = 7200.0;
  auto gain = [&] { return config.eq_gain_db * (2.0 * unit(*rng) - 1.0); };
  for (int i = 0; i < config.n_eq_peaks; ++i) {
    const double frac = config.n_eq_peaks == 1 ? 0.5 : double(i) / (config.n_eq_peaks - 1);
    EqBand b;
    b.center_hz = lo * std::pow(hi / lo, frac);
    b.bandwidth_hz = b.center_hz / config.eq_q;
    b.gain_db = gain();
    p.peaks.push_back(b);
  }
  p.low_shelf_db = gain();
  p.high_shelf_db = gain();
  return p;
}

namespace {

struct Biquad {
  double b0, b1, b2, a1, a2;

  void Run(std::vector<double> *x) const {
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
    for (double &v : *x) {
      const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
};

Biquad Normalized(double b0, double b1, double b2, double a0, double a1, double a2) {
  return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

Biquad Peaking(double fs, double f0, double q, double gain_db) {
  const double a = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * f0 / fs;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double c = std::cos(w0);
  return Normalized(1 + alpha * a, -2 * c, 1 - alpha * a, 1 + alpha / a, -2 * c,
                    1 - alpha / a);
}

Biquad Shelf(double fs, double f0, double gain_db, bool low) {
  const double a = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * f0 / fs;
  const double c = std::cos(w0);
  const double alpha = std::sin(w0) / 2.0 * std::sqrt(2.0);
  const double sa = 2.0 * std::sqrt(a) * alpha;
  if (low)
    return Normalized(a * ((a + 1) - (a - 1) * c + sa), 2 * a * ((a - 1) - (a + 1) * c),
                      a * ((a + 1) - (a - 1) * c - sa), (a + 1) + (a - 1) * c + sa,
                      -2 * ((a - 1) + (a + 1) * c), (a + 1) + (a - 1) * c - sa);
  return Normalized(a * ((a + 1) + (a - 1) * c + sa), -2 * a * ((a - 1) + (a + 1) * c),
                    a * ((a + 1) + (a - 1) * c - sa), (a + 1) - (a - 1) * c + sa,
                    2 * ((a - 1) - (a + 1) * c), (a + 1) - (a - 1) * c - sa);
}

double WrapPhase(double x) {
  return x - 2.0 * std::numbers::pi * std::floor((x + std::numbers::pi) / (2.0 * std::numbers::pi));
}

double Interp(const std::vector<double> &v, double pos) {
  const double last = static_cast<double>(v.size() - 1);
  if (pos >= last) return v.back();
  const auto k = static_cast<size_t>(pos);
  const double f = pos - static_cast<double>(k);
  return (1.0 - f) * v[k] + f * v[k + 1];
}

void CheckInput(std::span<const float> wave, int sample_rate) {
  if (sample_rate != kSampleRate)
    throw DataError("perturbation expects 16 kHz input, got " + std::to_string(sample_rate) + " Hz");
  if (wave.empty()) throw DataError("perturbation input is empty");
}

}  // namespace

Waveform ApplyEqualizer(std::span<const float> wave, int sample_rate,
                        const PerturbParams &params) {
  CheckInput(wave, sample_rate);
  params.Validate();
  std::vector<double> x(wave.begin(), wave.end());
  // Zero-gain sections are exact identities and are skipped.
  for (const auto &b : params.peaks)
    if (b.gain_db != 0.0)
      Peaking(sample_rate, b.center_hz, b.center_hz / b.bandwidth_hz, b.gain_db).Run(&x);
  if (params.low_shelf_db != 0.0) Shelf(sample_rate, kLowShelfHz, params.low_shelf_db, true).Run(&x);
  if (params.high_shelf_db != 0.0)
    Shelf(sample_rate, kHighShelfHz, params.high_shelf_db, false).Run(&x);
  return Waveform(x.begin(), x.end());
}

std::vector<double> PeakHull(std::span<const double> log_magnitude) {
  const int n = static_cast<int>(log_magnitude.size());
  std::vector<int> peaks;
  const double floor =
      *std::max_element(log_magnitude.begin(), log_magnitude.end()) + std::log(1e-7);
  for (int k = 1; k + 1 < n; ++k)
    if (log_magnitude[k] > floor && log_magnitude[k] > log_magnitude[k - 1] &&
        log_magnitude[k] >= log_magnitude[k + 1])
      peaks.push_back(k);
  if (peaks.size() < 2) return {log_magnitude.begin(), log_magnitude.end()};

  // Three-point Lagrange parabola through peaks c-1, c, c+1, evaluated at x.
  const auto parabola = [&](size_t c, double x) {
    const double x0 = peaks[c - 1], x1 = peaks[c], x2 = peaks[c + 1];
    return log_magnitude[peaks[c - 1]] * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
           log_magnitude[peaks[c]] * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
           log_magnitude[peaks[c + 1]] * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  };
  std::vector<double> hull(n);
  for (int k = 0; k <= peaks.front(); ++k) hull[k] = log_magnitude[peaks.front()];
  for (int k = peaks.back(); k < n; ++k) hull[k] = log_magnitude[peaks.back()];
  for (size_t i = 0; i + 1 < peaks.size(); ++i) {
    const int k0 = peaks[i], k1 = peaks[i + 1];
    for (int k = k0; k <= k1; ++k) {
      double sum = 0.0;
      int count = 0;
      if (i >= 1) {
        sum += parabola(i, k);
        ++count;
      }
      if (i + 2 < peaks.size()) {
        sum += parabola(i + 1, k);
        ++count;
      }
      if (count > 0) {
        hull[k] = sum / count;
      } else {
        const double u = static_cast<double>(k - k0) / (k1 - k0);
        hull[k] = (1.0 - u) * log_magnitude[k0] + u * log_magnitude[k1];
      }
    }
  }
  return hull;
}

std::vector<double> CepstralEnvelope(std::span<const double> magnitude, int fft_size,
                                     int lifter_cutoff, bool peak_hull) {
  const int half = fft_size / 2 + 1;
  if (static_cast<int>(magnitude.size()) != half)
    throw ConfigError("cepstral envelope: magnitude size must be fft_size/2+1");
  std::vector<double> log_mag(half);
  for (int k = 0; k < half; ++k) log_mag[k] = std::log(std::max(magnitude[k], 1e-10));
  if (peak_hull) log_mag = PeakHull(log_mag);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> log_spec(log_mag.begin(), log_mag.end()), smooth;
  std::vector<double> cep;
  fft.inv(cep, log_spec, fft_size);
  for (int n = lifter_cutoff + 1; n < fft_size - lifter_cutoff; ++n) cep[n] = 0.0;
  fft.fwd(smooth, cep);
  std::vector<double> env(half);
  for (int k = 0; k < half; ++k) env[k] = std::exp(smooth[k].real());
  return env;
}

int CepstralPitchPeriod(std::span<const double> magnitude, int fft_size, int sample_rate) {
  const int half = fft_size / 2 + 1;
  if (static_cast<int>(magnitude.size()) != half)
    throw ConfigError("cepstral pitch: magnitude size must be fft_size/2+1");
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> log_spec(half);
  for (int k = 0; k < half; ++k) log_spec[k] = std::log(std::max(magnitude[k], 1e-10));
  std::vector<double> cep;
  fft.inv(cep, log_spec, fft_size);
  // Voice pitch between 60 and 500 Hz.
  const int lo = std::max(2, sample_rate / 500);
  const int hi = std::min(fft_size / 2 - 1, sample_rate / 60);
  int best = 0;
  double best_value = 0.1;  // weaker rahmonics count as unvoiced
  for (int n = lo; n <= hi; ++n)
    if (cep[n] > best_value) {
      best_value = cep[n];
      best = n;
    }
  return best;
}

Waveform PerturbWaveform(std::span<const float> wave, int sample_rate,
                         const PerturbParams &params, const VocoderConfig &vocoder) {
  CheckInput(wave, sample_rate);
  params.Validate();
  const int n_fft = vocoder.fft_size, hop = vocoder.hop, half = n_fft / 2 + 1;
  if (n_fft % hop != 0) throw ConfigError("vocoder: hop must divide fft_size");
  const auto n = static_cast<int64_t>(wave.size());

  // Pad by one window on the left and at least one on the right so every
  // output sample is covered by n_fft / hop frames.
  int64_t padded = n + 2 * n_fft;
  padded += (hop - (padded - n_fft) % hop) % hop;
  std::vector<double> x(padded, 0.0);
  for (int64_t i = 0; i < n; ++i) x[n_fft + i] = wave[i];
  const int64_t n_frames = (padded - n_fft) / hop + 1;

  std::vector<double> window(n_fft);
  for (int i = 0; i < n_fft; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n_fft);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(n_fft), out_frame;
  std::vector<std::complex<double>> spec, out_spec(half);
  std::vector<double> mag(half), phase(half), prev_phase(half, 0.0),
      resid(half), warped(half), rotation, prev_rotation;
  std::vector<int> peaks, prev_peaks;
  std::vector<double> ola(padded, 0.0), norm(padded, 0.0);

  const double rho_f = params.formant_ratio, rho_p = params.f0_ratio;
  for (int64_t t = 0; t < n_frames; ++t) {
    const int64_t start = t * hop;
    for (int i = 0; i < n_fft; ++i) frame[i] = x[start + i] * window[i];
    fft.fwd(spec, frame);
    for (int k = 0; k < half; ++k) {
      mag[k] = std::abs(spec[k]);
      phase[k] = std::arg(spec[k]);
    }
    int cutoff = vocoder.lifter_cutoff;
    if (vocoder.pitch_adaptive_factor > 0.0) {
      const int period = CepstralPitchPeriod(mag, n_fft, sample_rate);
      cutoff = std::max(
          cutoff, static_cast<int>(std::lround(vocoder.pitch_adaptive_factor * period)));
    }
    const std::vector<double> env =
        CepstralEnvelope(mag, n_fft, cutoff, vocoder.peak_hull);
    for (int k = 0; k < half; ++k) resid[k] = mag[k] / env[k];
    // Formant warp: E'(f) = E(f / rho_f).
    for (int j = 0; j < half; ++j) warped[j] = rho_f == 1.0 ? env[j] : Interp(env, j / rho_f);

    if (rho_p == 1.0) {
      for (int j = 0; j < half; ++j) out_spec[j] = std::polar(warped[j] * resid[j], phase[j]);
    } else {
      // Peak-locked shifting: every spectral peak moves together with its
      // region of influence, so the lobe shape (and with it the within-frame
      // time envelope) is preserved. A per-peak phase rotation accumulated
      // across frames makes the shifted partial advance at rho_p times its
      // measured instantaneous frequency.
      std::fill(out_spec.begin(), out_spec.end(), std::complex<double>(0.0));
      const double peak_floor = 1e-7 * *std::max_element(mag.begin(), mag.end());
      peaks.clear();
      for (int k = 1; k + 1 < half; ++k)
        if (mag[k] > peak_floor && mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
          peaks.push_back(k);
      rotation.assign(peaks.size(), 0.0);
      for (size_t i = 0; i < peaks.size(); ++i) {
        const int kp = peaks[i];
        const double omega = 2.0 * std::numbers::pi * kp / n_fft;
        const double inst =
            t == 0 ? omega : omega + WrapPhase(phase[kp] - prev_phase[kp] - hop * omega) / hop;
        double previous = 0.0;
        if (!prev_peaks.empty()) {
          auto it = std::lower_bound(prev_peaks.begin(), prev_peaks.end(), kp);
          size_t m = static_cast<size_t>(it - prev_peaks.begin());
          if (m == prev_peaks.size() || (m > 0 && kp - prev_peaks[m - 1] < *it - kp)) --m;
          previous = prev_rotation[m];
        }
        rotation[i] = WrapPhase(previous + hop * (rho_p - 1.0) * inst);
        const double true_bin = inst * n_fft / (2.0 * std::numbers::pi);
        const auto shift = static_cast<int>(std::lround(true_bin * rho_p - kp));
        const int lo = i == 0 ? 0 : (peaks[i - 1] + kp) / 2 + 1;
        const int hi = i + 1 == peaks.size() ? half - 1 : (kp + peaks[i + 1]) / 2;
        for (int k = lo; k <= hi; ++k) {
          const int j = k + shift;
          if (j < 0 || j >= half) continue;
          out_spec[j] += std::polar(warped[j] * resid[k], phase[k] + rotation[i]);
        }
      }
      prev_peaks.swap(peaks);
      prev_rotation.swap(rotation);
    }
    out_spec[0] = out_spec[0].real();
    out_spec[half - 1] = out_spec[half - 1].real();
    prev_phase = phase;

    fft.inv(out_frame, out_spec, n_fft);
    for (int i = 0; i < n_fft; ++i) {
      ola[start + i] += out_frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  Waveform y(n);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t p = n_fft + i;
    y[i] = static_cast<float>(ola[p] / std::max(norm[p], 1e-12));
  }
  return ApplyEqualizer(y, sample_rate, params);
}

SpeakerTransform ApplyToVoice(const SpeakerTransform &voice, const PerturbParams &params) {
  return {voice.formant_scale * params.formant_ratio, voice.f0_scale * params.f0_ratio};
}

FrameMatrix PerturbSynthetic(const SyntheticWorld &world, const FrameMatrix &features,
                             const std::vector<int> &labels,
                             const SpeakerTransform &voice_in,
                             const SpeakerTransform &voice_out, std::mt19937_64 *rng) {
  const auto &spec = world.spec();
  if (features.rows() != static_cast<Eigen::Index>(labels.size()) ||
      features.cols() != spec.feature_dim)
    throw DataError("features not traceable to the synthetic corpus: shape mismatch");
  double sq = 0.0, worst = 0.0;
  for (size_t t = 0; t < labels.size(); ++t) {
    const RowVector clean = world.RenderFrame(labels[t], voice_in);
    const RowVector r = features.row(t) - clean;
    sq += r.squaredNorm();
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  const double rms = std::sqrt(sq / std::max<double>(1.0, features.size()));
  const double tol = 1e-9 * (1.0 + features.cwiseAbs().maxCoeff());
  const bool ok = spec.noise_std == 0.0 ? worst <= tol : rms <= 2.0 * spec.noise_std + tol;
  if (!ok)
    throw DataError("features not traceable to the synthetic corpus under the given voice "
                    "(residual rms " + std::to_string(rms) + ")");
  return world.RenderFrames(labels, voice_out, rng);
}

}  // namespace spinlab
