// core/include/spinlab/training.h

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

#ifndef SPINLAB_TRAINING_H_
#define SPINLAB_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlab/checkpoint.h"
#include "spinlab/corpus.h"
#include "spinlab/model.h"
#include "spinlab/perturb.h"
#include "spinlab/sinkhorn.h"

namespace spinlab {

/// How the smoothed targets are produced. kArgmax is the collapse ablation.
enum class TargetMode { kSinkhorn, kArgmax };

enum class Precision { kDouble, kSingle };

struct TrainConfig {
  int K = 256;
  int D = 256;
  double tau = 0.1;
  double epsilon = 0.02;
  int sinkhorn_iters = 3;
  TargetMode target_mode = TargetMode::kSinkhorn;
  double batch_seconds = 256.0;
  int total_steps = 5000;
  int warmup_steps = 2500;
  double lr_peak = 1e-4;
  double lr_final = 1e-6;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.0;
  uint64_t seed = 0;

  // Encoder geometry.
  int hidden_dim = 128;
  int n_layers = 3;
  int n_frozen = 1;
  bool projection_bias = true;
  bool standardize_inputs = true;
  Precision precision = Precision::kDouble;

  void Validate() const;
};

void to_json(nlohmann::json &j, const TrainConfig &c);
void from_json(const nlohmann::json &j, TrainConfig &c);

struct TrainRecord {
  int step = 0;
  double loss = 0.0;
  double lr = 0.0;
  double utilization = 0.0;
  double mean_p_entropy = 0.0;
  double wall_clock_s = 0.0;
};

struct TrainLog {
  std::vector<TrainRecord> records;
  /// step,loss,lr,utilization,mean_p_entropy,wall_clock_s
  void WriteCsv(std::ostream &os) const;
};

/// Gradients laid out like the parameters; frozen blocks are zero.
struct Gradients {
  std::vector<AffineLayer> encoder;
  Matrix projection_weight;
  Vector projection_bias;
  Matrix codewords;

  /// Zero-filled gradients shaped like `params`.
  static Gradients ZerosLike(const ModelParams &params);
  /// Name of the first block holding a NaN or inf, or empty.
  std::string FirstNonFinite() const;
};

/// -(1/2B) sum_b sum_k [ Qt(b,k) log P(b,k) + Q(b,k) log Pt(b,k) ], with the
/// log floored at log(1e-30).
double SwappedLoss(const AssignmentMatrix &P, const AssignmentMatrix &Pt,
                   const AssignmentMatrix &Q, const AssignmentMatrix &Qt);

/// Forward state of one view, kept for the backward pass.
struct ViewForward {
  std::vector<FrameMatrix> activations;  // encoder inputs/outputs
  FrameMatrix projected;                 // before normalisation
  FrameMatrix Z;
  Matrix log_p;
  AssignmentMatrix P;
};

ViewForward ForwardView(const FrameMatrix &frames, const ModelParams &params,
                        Precision precision = Precision::kDouble);

/// Targets of one view (Sinkhorn or argmax ablation), computed from Z.
AssignmentMatrix ComputeTargets(const FrameMatrix &Z, const Codebook &codebook,
                                const TrainConfig &config);

struct LossAndGradients {
  double loss = 0.0;
  Gradients grads;
  AssignmentMatrix P, Pt, Q, Qt;
};

/// Swapped loss and its analytic gradient with the targets held constant.
LossAndGradients LossGradientsWithTargets(const FrameBatchPair &pair, const ModelParams &params,
                                          const AssignmentMatrix &Q, const AssignmentMatrix &Qt,
                                          Precision precision = Precision::kDouble);

/// Full step: forward both views, targets per view (no gradient), swapped
/// loss, analytic gradients. Throws NumericError naming the first
/// non-finite gradient block.
LossAndGradients LossGradients(const FrameBatchPair &pair, const ModelParams &params,
                               const TrainConfig &config);

/// 0 -> lr_peak linearly over [0, warmup], then lr_peak -> lr_final over
/// [warmup, total]. Throws ConfigError outside [0, total_steps].
double LrSchedule(int step, const TrainConfig &config);

/// steps * effective_batch_seconds / 3600.
double ProcessedSpeechHours(double steps, double effective_batch_seconds);

/// |distinct ids| / K. Throws DataError for ids outside [0, K).
double CodebookUtilization(const std::vector<int> &code_ids, int K);

/// Entropy (nats) of the column mean of P.
double MeanDistributionEntropy(const AssignmentMatrix &P);

/// Adam with decoupled weight decay over the trainable blocks.
class AdamOptimizer {
 public:
  AdamOptimizer(const ModelParams &params, const TrainConfig &config);
  void Step(ModelParams *params, const Gradients &grads, double lr);
  int64_t steps() const { return t_; }

 private:
  void Update(Eigen::Ref<Matrix> p, const Matrix &g, Matrix *m, Matrix *v, double lr,
              bool decay);
  double beta1_, beta2_, eps_, weight_decay_;
  int64_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

/// Model initialisation for a corpus: InitParams with the corpus feature
/// width, plus frozen input standardisation when configured.
ModelParams InitModelForCorpus(const std::vector<FrameMatrix> &features,
                               const TrainConfig &config);

/// Builds the perturbed view of a batch. Feature-level synthetic corpora
/// re-render under a perturbed voice; waveform corpora go through
/// PerturbWaveform and the feature front end.
FrameBatchPair MakeBatchPair(const CorpusManifest &corpus, const FrameBatch &batch,
                             const PerturbConfig &perturb, const FeatureConfig &features,
                             const SyntheticWorld *world, std::mt19937_64 *rng);

struct TrainResult {
  Checkpoint checkpoint;
  TrainLog log;
  double processed_speech_hours = 0.0;
};

/// The training loop. Deterministic given config.seed and perturb.seed
/// (wall-clock excepted). `init` overrides InitModelForCorpus.
TrainResult Train(const CorpusManifest &corpus, const TrainConfig &config,
                  const PerturbConfig &perturb, const FeatureConfig &features = {},
                  const std::optional<ModelParams> &init = std::nullopt);

}  // namespace spinlab

#endif  // SPINLAB_TRAINING_H_
