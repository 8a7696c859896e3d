// core/src/corpus.cc

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

#include "spinlab/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "spinlab/audio-io.h"

namespace spinlab {

namespace {

const char *ModeName(SynthesisMode m) {
  return m == SynthesisMode::kAudio ? "audio" : "feature";
}

std::string Pad(const std::string &prefix, size_t i, size_t width) {
  std::string n = std::to_string(i);
  if (n.size() < width) n.insert(0, width - n.size(), '0');
  return prefix + n;
}

size_t Width(size_t n) { return std::to_string(n > 0 ? n - 1 : 0).size(); }

double LogDistance(const std::array<double, 3> &a, const std::array<double, 3> &b) {
  double s = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double d = std::log(a[j] / b[j]);
    s += d * d;
  }
  return std::sqrt(s);
}

// Distance between formant *ratio* patterns; two phones that differ only by a
// global frequency scale are indistinguishable across speakers.
double RatioDistance(const std::array<double, 3> &a, const std::array<double, 3> &b) {
  const double d1 = std::log(a[1] / a[0]) - std::log(b[1] / b[0]);
  const double d2 = std::log(a[2] / a[1]) - std::log(b[2] / b[1]);
  return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace

void SyntheticSpec::Validate() const {
  std::vector<std::string> bad;
  if (n_phones < 2) bad.push_back("n_phones (must be >= 2)");
  if (n_speakers < 1) bad.push_back("n_speakers (must be >= 1)");
  if (!(phone_frequency_skew >= 0.0) || !std::isfinite(phone_frequency_skew))
    bad.push_back("phone_frequency_skew (must be >= 0)");
  if (frames_per_phone.first < 1 || frames_per_phone.first > frames_per_phone.second)
    bad.push_back("frames_per_phone (need 1 <= min <= max)");
  if (feature_dim < 1) bad.push_back("feature_dim (must be >= 1)");
  auto check_range = [&](const std::pair<double, double> &r, const char *name) {
    if (!(r.first > 0.0 && r.first <= r.second && std::isfinite(r.second)))
      bad.push_back(std::string(name) + " (need 0 < lo <= hi)");
  };
  check_range(speaker_formant_scale_range, "speaker_formant_scale_range");
  check_range(speaker_f0_scale_range, "speaker_f0_scale_range");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
    bad.push_back("noise_std (must be >= 0)");
  if (utterances_per_speaker < 1)
    bad.push_back("utterances_per_speaker (must be >= 1)");
  if (phones_per_utterance.first < 1 ||
      phones_per_utterance.first > phones_per_utterance.second)
    bad.push_back("phones_per_utterance (need 1 <= min <= max)");
  if (!(base_pitch_hz > 0.0 && base_pitch_hz < 1000.0))
    bad.push_back("base_pitch_hz (must be in (0, 1000))");
  if (!bad.empty()) {
    std::string msg = "invalid synthetic spec:";
    for (const auto &b : bad) msg += " " + b + ";";
    throw ConfigError(msg);
  }
}

void to_json(nlohmann::json &j, const SyntheticSpec &s) {
  j = nlohmann::json{
      {"n_phones", s.n_phones},
      {"n_speakers", s.n_speakers},
      {"phone_frequency_skew", s.phone_frequency_skew},
      {"frames_per_phone", {s.frames_per_phone.first, s.frames_per_phone.second}},
      {"feature_dim", s.feature_dim},
      {"speaker_formant_scale_range",
       {s.speaker_formant_scale_range.first, s.speaker_formant_scale_range.second}},
      {"speaker_f0_scale_range",
       {s.speaker_f0_scale_range.first, s.speaker_f0_scale_range.second}},
      {"noise_std", s.noise_std},
      {"mode", ModeName(s.mode)},
      {"seed", s.seed},
      {"utterances_per_speaker", s.utterances_per_speaker},
      {"phones_per_utterance",
       {s.phones_per_utterance.first, s.phones_per_utterance.second}},
      {"base_pitch_hz", s.base_pitch_hz}};
}

void from_json(const nlohmann::json &j, SyntheticSpec &s) {
  SyntheticSpec d;
  auto pair_i = [&](const char *k, std::pair<int, int> def) {
    if (!j.contains(k)) return def;
    const auto &a = j.at(k);
    if (!a.is_array() || a.size() != 2)
      throw ConfigError(std::string("synthetic spec: ") + k + " must be [lo, hi]");
    return std::pair<int, int>(a[0].get<int>(), a[1].get<int>());
  };
  auto pair_d = [&](const char *k, std::pair<double, double> def) {
    if (!j.contains(k)) return def;
    const auto &a = j.at(k);
    if (!a.is_array() || a.size() != 2)
      throw ConfigError(std::string("synthetic spec: ") + k + " must be [lo, hi]");
    return std::pair<double, double>(a[0].get<double>(), a[1].get<double>());
  };
  s.n_phones = j.value("n_phones", d.n_phones);
  s.n_speakers = j.value("n_speakers", d.n_speakers);
  s.phone_frequency_skew = j.value("phone_frequency_skew", d.phone_frequency_skew);
  s.frames_per_phone = pair_i("frames_per_phone", d.frames_per_phone);
  s.feature_dim = j.value("feature_dim", d.feature_dim);
  s.speaker_formant_scale_range =
      pair_d("speaker_formant_scale_range", d.speaker_formant_scale_range);
  s.speaker_f0_scale_range = pair_d("speaker_f0_scale_range", d.speaker_f0_scale_range);
  s.noise_std = j.value("noise_std", d.noise_std);
  const std::string mode = j.value("mode", std::string("feature"));
  if (mode == "feature")
    s.mode = SynthesisMode::kFeature;
  else if (mode == "audio")
    s.mode = SynthesisMode::kAudio;
  else
    throw ConfigError("synthetic spec: mode must be 'feature' or 'audio', got '" +
                      mode + "'");
  s.seed = j.value("seed", d.seed);
  s.utterances_per_speaker = j.value("utterances_per_speaker", d.utterances_per_speaker);
  s.phones_per_utterance = pair_i("phones_per_utterance", d.phones_per_utterance);
  s.base_pitch_hz = j.value("base_pitch_hz", d.base_pitch_hz);
}

SyntheticWorld::SyntheticWorld(const SyntheticSpec &spec) : spec_(spec) {
  spec_.Validate();
  std::mt19937_64 rng(spec_.seed);

  // Zipf phone prior, normalised with compensated summation.
  phone_probs_.resize(spec_.n_phones);
  CompensatedSum z;
  for (int i = 0; i < spec_.n_phones; ++i) {
    phone_probs_[i] = 1.0 / std::pow(i + 1.0, spec_.phone_frequency_skew);
    z.Add(phone_probs_[i]);
  }
  for (double &p : phone_probs_) p /= z.Value();

  // Formant patterns, rejection-sampled to stay pairwise distinguishable.
  std::uniform_real_distribution<double> f1(250.0, 850.0), f2(900.0, 2300.0),
      f3(2400.0, 3400.0);
  const double min_abs = 0.08, min_ratio = 0.10;
  for (int p = 0; p < spec_.n_phones; ++p) {
    PhoneTemplate t;
    for (int attempt = 0;; ++attempt) {
      t.formants_hz = {f1(rng), f2(rng), f3(rng)};
      bool ok = true;
      for (const auto &q : phones_) {
        if (LogDistance(t.formants_hz, q.formants_hz) < min_abs ||
            RatioDistance(t.formants_hz, q.formants_hz) < min_ratio) {
          ok = false;
          break;
        }
      }
      if (ok || attempt > 2000) break;
    }
    for (int j = 0; j < 3; ++j)
      t.bandwidths_hz[j] = 90.0 + 0.08 * t.formants_hz[j];
    t.amplitudes = {1.0, 0.8, 0.6};
    phones_.push_back(t);
  }

  std::uniform_real_distribution<double> fs(spec_.speaker_formant_scale_range.first,
                                            spec_.speaker_formant_scale_range.second);
  std::uniform_real_distribution<double> ps(spec_.speaker_f0_scale_range.first,
                                            spec_.speaker_f0_scale_range.second);
  for (int s = 0; s < spec_.n_speakers; ++s) {
    SpeakerTransform v;
    v.formant_scale = fs(rng);
    v.f0_scale = ps(rng);
    speakers_.push_back(v);
  }

  const double mel_lo = HzToMel(100.0), mel_hi = HzToMel(7000.0);
  const double mel_top = HzToMel(8000.0);
  freq_axis_.resize(spec_.feature_dim);
  tilt_.resize(spec_.feature_dim);
  for (int i = 0; i < spec_.feature_dim; ++i) {
    const double frac = spec_.feature_dim == 1 ? 0.5 : double(i) / (spec_.feature_dim - 1);
    freq_axis_[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * frac);
    tilt_[i] = 1.0 - 2.0 * HzToMel(freq_axis_[i]) / mel_top;
  }
}

namespace {

double FormantEnvelope(const PhoneTemplate &t, double formant_scale, double hz) {
  const double f = hz / formant_scale;
  double e = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double u = (f - t.formants_hz[j]) / t.bandwidths_hz[j];
    e += t.amplitudes[j] * std::exp(-0.5 * u * u);
  }
  return e;
}

}  // namespace

double SyntheticWorld::Envelope(int phone, const SpeakerTransform &voice,
                                double hz) const {
  const double tilt = 1.0 - 2.0 * HzToMel(hz) / HzToMel(8000.0);
  return FormantEnvelope(phones_.at(phone), voice.formant_scale, hz) +
         tilt * std::log(voice.f0_scale);
}

RowVector SyntheticWorld::RenderFrame(int phone, const SpeakerTransform &voice) const {
  const PhoneTemplate &t = phones_.at(phone);
  const double offset = std::log(voice.f0_scale);
  RowVector frame(spec_.feature_dim);
  for (int i = 0; i < spec_.feature_dim; ++i)
    frame(i) = FormantEnvelope(t, voice.formant_scale, freq_axis_[i]) + tilt_[i] * offset;
  return frame;
}

FrameMatrix SyntheticWorld::RenderFrames(const std::vector<int> &labels,
                                         const SpeakerTransform &voice,
                                         std::mt19937_64 *rng) const {
  FrameMatrix out(static_cast<Eigen::Index>(labels.size()), spec_.feature_dim);
  std::vector<RowVector> cache(spec_.n_phones);
  std::vector<bool> have(spec_.n_phones, false);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (size_t t = 0; t < labels.size(); ++t) {
    const int p = labels[t];
    if (p < 0 || p >= spec_.n_phones)
      throw DataError("phone label " + std::to_string(p) + " out of range");
    if (!have[p]) {
      cache[p] = RenderFrame(p, voice);
      have[p] = true;
    }
    out.row(t) = cache[p];
    if (spec_.noise_std > 0.0)
      for (int i = 0; i < spec_.feature_dim; ++i)
        out(t, i) += spec_.noise_std * noise(*rng);
  }
  return out;
}

Waveform SyntheticWorld::RenderAudio(const std::vector<int> &labels,
                                     const SpeakerTransform &voice,
                                     std::mt19937_64 *rng) const {
  constexpr double kEnvelopeGain = 2.5;
  constexpr double kTargetRms = 0.1;
  const double f0 = spec_.base_pitch_hz * voice.f0_scale;
  const int n_harm = std::max(1, static_cast<int>(7600.0 / f0));
  std::vector<double> phase(n_harm, 0.0);
  std::vector<double> amp(n_harm);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double noise_amp = 0.01 * spec_.noise_std;

  Waveform wave;
  wave.reserve(labels.size() * kHopSamples);
  size_t t = 0;
  while (t < labels.size()) {
    const int p = labels[t];
    if (p < 0 || p >= spec_.n_phones)
      throw DataError("phone label " + std::to_string(p) + " out of range");
    size_t run = t;
    while (run < labels.size() && labels[run] == p) ++run;
    double power = 0.0;
    for (int h = 0; h < n_harm; ++h) {
      amp[h] = std::exp(kEnvelopeGain *
                        FormantEnvelope(phones_[p], voice.formant_scale, (h + 1) * f0)) /
               std::sqrt(h + 1.0);
      power += 0.5 * amp[h] * amp[h];
    }
    const double scale = kTargetRms / std::sqrt(power);
    const size_t n = (run - t) * kHopSamples;
    for (size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int h = 0; h < n_harm; ++h) {
        s += amp[h] * std::sin(phase[h]);
        phase[h] += 2.0 * std::numbers::pi * (h + 1) * f0 / kSampleRate;
        if (phase[h] > 2.0 * std::numbers::pi) phase[h] -= 2.0 * std::numbers::pi;
      }
      double v = scale * s;
      if (noise_amp > 0.0) v += noise_amp * noise(*rng);
      wave.push_back(static_cast<float>(v));
    }
    t = run;
  }
  return wave;
}

void CorpusManifest::Validate() const {
  if (!(frame_rate > 0.0)) throw DataError("manifest: frame_rate must be > 0");
  if (utterances.empty()) throw DataError("empty corpus");
  if (phones.empty()) throw DataError("manifest: no phones registered");
  if (speakers.empty()) throw DataError("manifest: no speakers registered");
  const int n_phones = static_cast<int>(phones.size());
  const int n_speakers = static_cast<int>(speakers.size());
  for (const auto &u : utterances) {
    if (u.speaker < 0 || u.speaker >= n_speakers)
      throw DataError("utterance " + u.id + ": unregistered speaker");
    const int64_t expect = FramesForDuration(u.duration_s, frame_rate);
    if (static_cast<int64_t>(u.labels.size()) != expect)
      throw DataError("utterance " + u.id + ": label count " +
                      std::to_string(u.labels.size()) + " != round(duration_s * frame_rate) = " +
                      std::to_string(expect));
    for (int p : u.labels)
      if (p < 0 || p >= n_phones)
        throw DataError("utterance " + u.id + ": unregistered phone id " +
                        std::to_string(p));
    if (u.features && u.features->rows() != expect)
      throw DataError("utterance " + u.id + ": feature rows " +
                      std::to_string(u.features->rows()) + " != label count " +
                      std::to_string(expect));
  }
}

int64_t CorpusManifest::TotalFrames() const {
  int64_t n = 0;
  for (const auto &u : utterances) n += static_cast<int64_t>(u.labels.size());
  return n;
}

nlohmann::json ManifestToJson(const CorpusManifest &corpus) {
  nlohmann::json j;
  j["format"] = "spinlab-manifest";
  j["version"] = 1;
  j["header"] = {{"frame_rate", corpus.frame_rate},
                 {"phones", corpus.phones},
                 {"speakers", corpus.speakers}};
  if (corpus.synthetic) j["synthetic"] = *corpus.synthetic;
  nlohmann::json utts = nlohmann::json::array();
  for (const auto &u : corpus.utterances) {
    nlohmann::json e = {{"id", u.id},
                        {"speaker", corpus.speakers.at(u.speaker)},
                        {"duration_s", u.duration_s},
                        {"labels", u.labels}};
    if (!u.source.empty()) e["source"] = u.source;
    utts.push_back(std::move(e));
  }
  j["utterances"] = std::move(utts);
  return j;
}

CorpusManifest ManifestFromJson(const nlohmann::json &j) {
  CorpusManifest m;
  try {
    const auto &h = j.at("header");
    m.frame_rate = h.at("frame_rate").get<double>();
    m.phones = h.at("phones").get<std::vector<std::string>>();
    m.speakers = h.at("speakers").get<std::vector<std::string>>();
    if (j.contains("synthetic")) m.synthetic = j.at("synthetic").get<SyntheticSpec>();
    for (const auto &e : j.at("utterances")) {
      Utterance u;
      u.id = e.at("id").get<std::string>();
      const std::string spk = e.at("speaker").get<std::string>();
      auto it = std::find(m.speakers.begin(), m.speakers.end(), spk);
      if (it == m.speakers.end())
        throw DataError("utterance " + u.id + ": speaker '" + spk +
                        "' not registered in header");
      u.speaker = static_cast<int>(it - m.speakers.begin());
      u.duration_s = e.at("duration_s").get<double>();
      u.labels = e.at("labels").get<std::vector<int>>();
      u.source = e.value("source", std::string());
      m.utterances.push_back(std::move(u));
    }
  } catch (const nlohmann::json::exception &ex) {
    throw DataError(std::string("malformed manifest: ") + ex.what());
  }
  return m;
}

CorpusManifest GenerateSyntheticCorpus(const SyntheticSpec &spec) {
  spec.Validate();
  const SyntheticWorld world(spec);
  CorpusManifest corpus;
  corpus.frame_rate = kFrameRate;
  corpus.synthetic = spec;
  const size_t pw = Width(spec.n_phones), sw = Width(spec.n_speakers);
  for (int p = 0; p < spec.n_phones; ++p) corpus.phones.push_back(Pad("ph", p, pw));
  for (int s = 0; s < spec.n_speakers; ++s)
    corpus.speakers.push_back(Pad("spk", s, sw));

  // Separate streams for the label sequence and the noise so the two modes
  // share identical label sequences for the same seed.
  std::mt19937_64 label_rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::mt19937_64 noise_rng(spec.seed ^ 0xc2b2ae3d27d4eb4fULL);
  std::discrete_distribution<int> phone_draw(world.phone_probabilities().begin(),
                                             world.phone_probabilities().end());
  std::uniform_int_distribution<int> len_draw(spec.frames_per_phone.first,
                                              spec.frames_per_phone.second);
  std::uniform_int_distribution<int> count_draw(spec.phones_per_utterance.first,
                                                spec.phones_per_utterance.second);
  const size_t uw = Width(static_cast<size_t>(spec.utterances_per_speaker));
  for (int s = 0; s < spec.n_speakers; ++s) {
    for (int k = 0; k < spec.utterances_per_speaker; ++k) {
      Utterance u;
      u.id = corpus.speakers[s] + "_" + Pad("u", k, uw);
      u.speaker = s;
      const int n_segments = count_draw(label_rng);
      int prev = -1;
      for (int seg = 0; seg < n_segments; ++seg) {
        int p = phone_draw(label_rng);
        // Adjacent segments differ so each segment is one token.
        while (p == prev) p = phone_draw(label_rng);
        const int len = len_draw(label_rng);
        u.labels.insert(u.labels.end(), len, p);
        prev = p;
      }
      u.duration_s = u.labels.size() / kFrameRate;
      if (spec.mode == SynthesisMode::kFeature)
        u.features = world.RenderFrames(u.labels, world.speakers()[s], &noise_rng);
      else
        u.waveform = world.RenderAudio(u.labels, world.speakers()[s], &noise_rng);
      corpus.utterances.push_back(std::move(u));
    }
  }
  corpus.Validate();
  return corpus;
}

CorpusManifest LoadCorpus(const std::filesystem::path &manifest_path) {
  std::ifstream is(manifest_path);
  if (!is) throw DataError("cannot open manifest " + manifest_path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception &ex) {
    throw DataError("manifest " + manifest_path.string() + " does not parse: " + ex.what());
  }
  CorpusManifest m = ManifestFromJson(j);
  if (m.utterances.empty()) throw DataError("empty corpus");
  const auto base = manifest_path.parent_path();
  for (auto &u : m.utterances) {
    if (u.source.empty())
      throw DataError("utterance " + u.id + ": no source");
    const auto path = base / u.source;
    if (!std::filesystem::exists(path))
      throw DataError("utterance " + u.id + ": missing file " + path.string());
    const auto ext = path.extension().string();
    if (ext == ".wav") {
      u.waveform = ReadWav(path);
    } else if (ext == ".fmat") {
      u.features = ReadFeatureDump(path);
    } else {
      throw DataError("unsupported audio format: " + path.string());
    }
  }
  m.Validate();
  return m;
}

std::filesystem::path SaveCorpus(const CorpusManifest &corpus,
                                 const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir / "data");
  CorpusManifest out = corpus;
  for (auto &u : out.utterances) {
    if (u.waveform) {
      u.source = "data/" + u.id + ".wav";
      WriteWav(dir / u.source, *u.waveform);
    } else if (u.features) {
      u.source = "data/" + u.id + ".fmat";
      WriteFeatureDump(dir / u.source, *u.features);
    }
  }
  const auto path = dir / "manifest.json";
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  os << ManifestToJson(out).dump(1) << "\n";
  return path;
}

FrameMatrix UtteranceFeatures(const Utterance &utt, const FeatureConfig &config) {
  if (utt.features) return *utt.features;
  if (!utt.waveform)
    throw DataError("utterance " + utt.id + " has neither features nor audio");
  FrameMatrix f = ExtractFeatures(*utt.waveform, config);
  const auto want = static_cast<Eigen::Index>(utt.labels.size());
  if (f.rows() == want) return f;
  // Durations that are not a multiple of the hop leave the floor-based frame
  // count one short of the rounded label count.
  if (std::abs(f.rows() - want) > 1)
    throw DataError("utterance " + utt.id + ": " + std::to_string(f.rows()) +
                    " feature frames for " + std::to_string(want) + " labels");
  FrameMatrix g(want, f.cols());
  for (Eigen::Index r = 0; r < want; ++r) g.row(r) = f.row(std::min(r, f.rows() - 1));
  return g;
}

std::vector<FrameMatrix> CorpusFeatures(const CorpusManifest &corpus,
                                        const FeatureConfig &config) {
  std::vector<FrameMatrix> out;
  out.reserve(corpus.utterances.size());
  for (const auto &u : corpus.utterances) out.push_back(UtteranceFeatures(u, config));
  return out;
}

FrameMatrix StackFrames(const std::vector<FrameMatrix> &per_utterance) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto &m : per_utterance) {
    rows += m.rows();
    cols = m.cols();
  }
  FrameMatrix out(rows, cols);
  Eigen::Index r = 0;
  for (const auto &m : per_utterance) {
    if (m.cols() != cols) throw DataError("inconsistent feature dimensions");
    out.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  return out;
}

std::vector<int> StackLabels(const CorpusManifest &corpus) {
  std::vector<int> out;
  for (const auto &u : corpus.utterances)
    out.insert(out.end(), u.labels.begin(), u.labels.end());
  return out;
}

std::vector<int> StackSpeakers(const CorpusManifest &corpus) {
  std::vector<int> out;
  for (const auto &u : corpus.utterances) out.insert(out.end(), u.labels.size(), u.speaker);
  return out;
}

std::vector<BatchPlan> BatchFrames(const CorpusManifest &corpus, double batch_seconds,
                                   uint64_t seed, uint64_t epoch) {
  if (corpus.utterances.empty()) throw DataError("empty corpus");
  if (!(batch_seconds > 0.0)) throw ConfigError("batch_seconds must be > 0");
  const auto capacity = static_cast<int64_t>(std::floor(batch_seconds * corpus.frame_rate + 1e-9));
  std::vector<size_t> order(corpus.utterances.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed * 0x100000001b3ULL + epoch);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<BatchPlan> batches;
  BatchPlan cur;
  for (size_t i : order) {
    const auto n = static_cast<int64_t>(corpus.utterances[i].labels.size());
    if (n > capacity)
      throw DataError("utterance " + corpus.utterances[i].id + " has " +
                      std::to_string(n) + " frames, more than the batch capacity of " +
                      std::to_string(capacity) + "; split it into shorter chunks");
    if (cur.frames + n > capacity) {
      batches.push_back(std::move(cur));
      cur = BatchPlan{};
    }
    cur.utterances.push_back(i);
    cur.frames += n;
  }
  if (!cur.utterances.empty()) batches.push_back(std::move(cur));
  return batches;
}

FrameBatch AssembleBatch(const CorpusManifest &corpus,
                         const std::vector<FrameMatrix> &features,
                         const BatchPlan &plan) {
  FrameBatch b;
  const Eigen::Index cols = features.at(plan.utterances.front()).cols();
  b.frames.resize(plan.frames, cols);
  Eigen::Index r = 0;
  for (size_t i : plan.utterances) {
    const auto &f = features.at(i);
    const auto &u = corpus.utterances.at(i);
    b.utterances.push_back(i);
    b.offsets.push_back(r);
    b.frames.middleRows(r, f.rows()) = f;
    b.labels.insert(b.labels.end(), u.labels.begin(), u.labels.end());
    b.speakers.insert(b.speakers.end(), u.labels.size(), u.speaker);
    r += f.rows();
  }
  return b;
}

}  // namespace spinlab
