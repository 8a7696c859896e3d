// core/include/spinlab/corpus.h

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

#ifndef SPINLAB_CORPUS_H_
#define SPINLAB_CORPUS_H_

#include <array>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlab/features.h"
#include "spinlab/types.h"

namespace spinlab {

enum class SynthesisMode { kFeature, kAudio };

/// Two-factor (content x speaker) synthetic corpus description.
struct SyntheticSpec {
  int n_phones = 20;
  int n_speakers = 16;
  double phone_frequency_skew = 1.0;  // Zipf exponent
  std::pair<int, int> frames_per_phone{3, 8};
  int feature_dim = 40;
  std::pair<double, double> speaker_formant_scale_range{0.8, 1.25};
  std::pair<double, double> speaker_f0_scale_range{0.7, 1.4};
  double noise_std = 0.1;
  SynthesisMode mode = SynthesisMode::kFeature;
  uint64_t seed = 0;

  // Corpus size knobs.
  int utterances_per_speaker = 10;
  std::pair<int, int> phones_per_utterance{20, 40};
  double base_pitch_hz = 120.0;

  /// Throws ConfigError naming every offending field.
  void Validate() const;
};

void to_json(nlohmann::json &j, const SyntheticSpec &spec);
void from_json(const nlohmann::json &j, SyntheticSpec &spec);

/// A synthetic speaker's voice: the two factors speaker perturbation acts on.
struct SpeakerTransform {
  double formant_scale = 1.0;
  double f0_scale = 1.0;
  bool operator==(const SpeakerTransform &) const = default;
};

struct PhoneTemplate {
  std::array<double, 3> formants_hz{};
  std::array<double, 3> bandwidths_hz{};
  std::array<double, 3> amplitudes{};
};

/// The generative model behind a synthetic corpus. Fully determined by the
/// spec (including its seed), so it can be rebuilt from a saved manifest.
class SyntheticWorld {
 public:
  explicit SyntheticWorld(const SyntheticSpec &spec);

  const SyntheticSpec &spec() const { return spec_; }
  const std::vector<PhoneTemplate> &phones() const { return phones_; }
  const std::vector<SpeakerTransform> &speakers() const { return speakers_; }
  const std::vector<double> &phone_probabilities() const { return phone_probs_; }
  /// Centre frequency (Hz) of each feature dimension.
  const std::vector<double> &frequency_axis() const { return freq_axis_; }

  /// Log-spectral envelope of `phone` under `voice` at frequency `hz`.
  double Envelope(int phone, const SpeakerTransform &voice, double hz) const;

  /// Noise-free feature-level frame.
  RowVector RenderFrame(int phone, const SpeakerTransform &voice) const;

  /// Feature-level frames for a label sequence plus N(0, noise_std^2) noise.
  FrameMatrix RenderFrames(const std::vector<int> &labels,
                           const SpeakerTransform &voice,
                           std::mt19937_64 *rng) const;

  /// 16 kHz audio for a label sequence (320 samples per frame).
  Waveform RenderAudio(const std::vector<int> &labels,
                       const SpeakerTransform &voice,
                       std::mt19937_64 *rng) const;

 private:
  SyntheticSpec spec_;
  std::vector<PhoneTemplate> phones_;
  std::vector<SpeakerTransform> speakers_;
  std::vector<double> phone_probs_;
  std::vector<double> freq_axis_;
  std::vector<double> tilt_;
};

struct Utterance {
  std::string id;
  int speaker = 0;
  double duration_s = 0.0;
  std::vector<int> labels;  // phone index per 20 ms frame
  std::string source;       // path relative to the manifest, may be empty
  std::optional<FrameMatrix> features;
  std::optional<Waveform> waveform;
};

/// Utterance inventory with per-frame phone labels and speaker ids.
struct CorpusManifest {
  double frame_rate = kFrameRate;
  std::vector<std::string> phones;
  std::vector<std::string> speakers;
  std::vector<Utterance> utterances;
  std::optional<SyntheticSpec> synthetic;

  /// Checks label lengths, id ranges and non-emptiness.
  void Validate() const;
  int64_t TotalFrames() const;
};

/// Header + utterance metadata only; inline data is not serialised.
nlohmann::json ManifestToJson(const CorpusManifest &corpus);
CorpusManifest ManifestFromJson(const nlohmann::json &j);

CorpusManifest GenerateSyntheticCorpus(const SyntheticSpec &spec);

/// Parses and validates a manifest and loads every referenced source
/// (.wav or .fmat, relative to the manifest's directory).
CorpusManifest LoadCorpus(const std::filesystem::path &manifest_path);

/// Writes manifest.json plus one source file per utterance under `dir`
/// (WAV for waveforms, feature dumps otherwise). Returns the manifest path.
std::filesystem::path SaveCorpus(const CorpusManifest &corpus,
                                 const std::filesystem::path &dir);

/// Features for one utterance: inline features, or the log-mel front end
/// applied to the waveform with rows aligned to the label count.
FrameMatrix UtteranceFeatures(const Utterance &utt,
                              const FeatureConfig &config = {});

/// Features for every utterance, in manifest order.
std::vector<FrameMatrix> CorpusFeatures(const CorpusManifest &corpus,
                                        const FeatureConfig &config = {});

/// Concatenated frames / labels / speakers in manifest order.
FrameMatrix StackFrames(const std::vector<FrameMatrix> &per_utterance);
std::vector<int> StackLabels(const CorpusManifest &corpus);
std::vector<int> StackSpeakers(const CorpusManifest &corpus);

struct BatchPlan {
  std::vector<size_t> utterances;
  int64_t frames = 0;
};

/// One epoch of batches: utterances shuffled with (seed, epoch) and packed
/// greedily, never exceeding batch_seconds * frame_rate frames.
std::vector<BatchPlan> BatchFrames(const CorpusManifest &corpus,
                                   double batch_seconds, uint64_t seed,
                                   uint64_t epoch = 0);

/// Original-side batch.
struct FrameBatch {
  FrameMatrix frames;
  std::vector<int> labels;
  std::vector<int> speakers;
  std::vector<size_t> utterances;
  std::vector<int64_t> offsets;  // first row of each utterance
  int64_t size() const { return frames.rows(); }
};

FrameBatch AssembleBatch(const CorpusManifest &corpus,
                         const std::vector<FrameMatrix> &features,
                         const BatchPlan &plan);

/// Original and speaker-perturbed views of the same frames.
struct FrameBatchPair {
  FrameMatrix original;
  FrameMatrix perturbed;
  std::vector<int> labels;
  std::vector<int> speakers;
  int64_t size() const { return original.rows(); }
};

}  // namespace spinlab

#endif  // SPINLAB_CORPUS_H_
