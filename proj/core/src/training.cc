// core/src/training.cc

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

#include "spinlab/training.h"

#include <chrono>
#include <cmath>
#include <ostream>
#include <set>

namespace spinlab {

namespace {

constexpr double kLogFloor = -69.07755278982137;  // log(1e-30)

const char *TargetModeName(TargetMode m) {
  return m == TargetMode::kArgmax ? "argmax" : "sinkhorn";
}

const char *PrecisionName(Precision p) { return p == Precision::kSingle ? "single" : "double"; }

void RoundToSingle(Matrix *m) { *m = m->cast<float>().cast<double>(); }

}  // namespace

void TrainConfig::Validate() const {
  std::vector<std::string> bad;
  if (K < 1) bad.push_back("K (must be >= 1)");
  if (D < 1) bad.push_back("D (must be >= 1)");
  if (!(tau > 0.0)) bad.push_back("tau (must be > 0)");
  if (target_mode == TargetMode::kSinkhorn && !(epsilon > 0.0))
    bad.push_back("epsilon (must be > 0 with Sinkhorn targets)");
  if (sinkhorn_iters < 1) bad.push_back("sinkhorn_iters (must be >= 1)");
  if (!(batch_seconds > 0.0)) bad.push_back("batch_seconds (must be > 0)");
  if (total_steps < 0) bad.push_back("total_steps (must be >= 0)");
  if (warmup_steps < 0 || warmup_steps > total_steps)
    bad.push_back("warmup_steps (need 0 <= warmup_steps <= total_steps)");
  if (!(lr_final > 0.0 && lr_peak > lr_final)) bad.push_back("lr (need lr_peak > lr_final > 0)");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0))
    bad.push_back("adam betas (must lie in [0, 1))");
  if (!(adam_eps > 0.0)) bad.push_back("adam_eps (must be > 0)");
  if (!(weight_decay >= 0.0)) bad.push_back("weight_decay (must be >= 0)");
  if (hidden_dim < 1) bad.push_back("hidden_dim (must be >= 1)");
  if (n_layers < 0 || n_frozen < 0 || n_frozen > n_layers)
    bad.push_back("n_frozen (need 0 <= n_frozen <= n_layers)");
  if (!bad.empty()) {
    std::string msg = "invalid train config:";
    for (const auto &b : bad) msg += " " + b + ";";
    throw ConfigError(msg);
  }
}

void to_json(nlohmann::json &j, const TrainConfig &c) {
  j = {{"K", c.K},
       {"D", c.D},
       {"tau", c.tau},
       {"epsilon", c.epsilon},
       {"sinkhorn_iters", c.sinkhorn_iters},
       {"target_mode", TargetModeName(c.target_mode)},
       {"batch_seconds", c.batch_seconds},
       {"total_steps", c.total_steps},
       {"warmup_steps", c.warmup_steps},
       {"lr_peak", c.lr_peak},
       {"lr_final", c.lr_final},
       {"adam_beta1", c.adam_beta1},
       {"adam_beta2", c.adam_beta2},
       {"adam_eps", c.adam_eps},
       {"weight_decay", c.weight_decay},
       {"seed", c.seed},
       {"hidden_dim", c.hidden_dim},
       {"n_layers", c.n_layers},
       {"n_frozen", c.n_frozen},
       {"projection_bias", c.projection_bias},
       {"standardize_inputs", c.standardize_inputs},
       {"precision", PrecisionName(c.precision)}};
}

void from_json(const nlohmann::json &j, TrainConfig &c) {
  const TrainConfig d;
  c.K = j.value("K", d.K);
  c.D = j.value("D", d.D);
  c.tau = j.value("tau", d.tau);
  c.epsilon = j.value("epsilon", d.epsilon);
  c.sinkhorn_iters = j.value("sinkhorn_iters", d.sinkhorn_iters);
  const std::string mode = j.value("target_mode", std::string("sinkhorn"));
  if (mode == "sinkhorn")
    c.target_mode = TargetMode::kSinkhorn;
  else if (mode == "argmax")
    c.target_mode = TargetMode::kArgmax;
  else
    throw ConfigError("train: target_mode must be 'sinkhorn' or 'argmax', got '" + mode + "'");
  c.batch_seconds = j.value("batch_seconds", d.batch_seconds);
  c.total_steps = j.value("total_steps", d.total_steps);
  c.warmup_steps = j.value("warmup_steps", d.warmup_steps);
  c.lr_peak = j.value("lr_peak", d.lr_peak);
  c.lr_final = j.value("lr_final", d.lr_final);
  c.adam_beta1 = j.value("adam_beta1", d.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", d.adam_beta2);
  c.adam_eps = j.value("adam_eps", d.adam_eps);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.seed = j.value("seed", d.seed);
  c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
  c.n_layers = j.value("n_layers", d.n_layers);
  c.n_frozen = j.value("n_frozen", d.n_frozen);
  c.projection_bias = j.value("projection_bias", d.projection_bias);
  c.standardize_inputs = j.value("standardize_inputs", d.standardize_inputs);
  const std::string prec = j.value("precision", std::string("double"));
  if (prec == "double")
    c.precision = Precision::kDouble;
  else if (prec == "single")
    c.precision = Precision::kSingle;
  else
    throw ConfigError("train: precision must be 'double' or 'single', got '" + prec + "'");
}

void TrainLog::WriteCsv(std::ostream &os) const {
  os << "step,loss,lr,utilization,mean_p_entropy,wall_clock_s\n";
  os.precision(17);
  for (const auto &r : records)
    os << r.step << ',' << r.loss << ',' << r.lr << ',' << r.utilization << ','
       << r.mean_p_entropy << ',' << r.wall_clock_s << '\n';
}

Gradients Gradients::ZerosLike(const ModelParams &params) {
  Gradients g;
  for (const auto &l : params.encoder.layers)
    g.encoder.push_back({Matrix::Zero(l.weight.rows(), l.weight.cols()),
                         Vector::Zero(l.bias.size())});
  g.projection_weight = Matrix::Zero(params.projection.weight.rows(),
                                     params.projection.weight.cols());
  g.projection_bias = Vector::Zero(params.projection.bias.size());
  g.codewords = Matrix::Zero(params.codebook.codewords.rows(), params.codebook.codewords.cols());
  return g;
}

std::string Gradients::FirstNonFinite() const {
  for (size_t l = 0; l < encoder.size(); ++l) {
    if (!encoder[l].weight.allFinite()) return "encoder.layer" + std::to_string(l) + ".weight";
    if (!encoder[l].bias.allFinite()) return "encoder.layer" + std::to_string(l) + ".bias";
  }
  if (!projection_weight.allFinite()) return "projection.weight";
  if (!projection_bias.allFinite()) return "projection.bias";
  if (!codewords.allFinite()) return "codebook.codewords";
  return {};
}

namespace {

void CheckSameShape(const Matrix &a, const Matrix &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ConfigError(std::string("swapped loss: shape mismatch for ") + what);
}

double CrossEntropyFromLog(const Matrix &log_p, const Matrix &target) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < log_p.size(); ++i) {
    const double q = target.data()[i];
    if (q != 0.0) s.Add(q * std::max(log_p.data()[i], kLogFloor));
  }
  return -s.Value();
}

double SwappedLossFromLog(const Matrix &log_p, const Matrix &log_pt, const Matrix &Q,
                          const Matrix &Qt) {
  const double B = static_cast<double>(log_p.rows());
  return (CrossEntropyFromLog(log_p, Qt) + CrossEntropyFromLog(log_pt, Q)) / (2.0 * B);
}

// dL/d(logits) for one view's cross-entropy term, already scaled by 1/(2B).
Matrix LogitGradient(const Matrix &log_p, const Matrix &P, const Matrix &target) {
  const Eigen::Index B = P.rows(), K = P.cols();
  const double scale = 1.0 / (2.0 * static_cast<double>(B));
  Matrix g(B, K);
  for (Eigen::Index b = 0; b < B; ++b) {
    double live = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
      if (log_p(b, k) >= kLogFloor) live += target(b, k);
    for (Eigen::Index k = 0; k < K; ++k) {
      const double own = log_p(b, k) >= kLogFloor ? target(b, k) : 0.0;
      g(b, k) = scale * (P(b, k) * live - own);
    }
  }
  return g;
}

void BackwardView(const ViewForward &fwd, const Matrix &logit_grad, const ModelParams &params,
                  Gradients *grads) {
  const double inv_tau = 1.0 / params.codebook.tau;
  const Matrix &C = params.codebook.codewords;
  const Matrix dZ = (logit_grad * C) * inv_tau;
  grads->codewords.noalias() += (logit_grad.transpose() * fwd.Z) * inv_tau;

  // Through the row normalisation z = y / ||y||.
  Matrix dy(dZ.rows(), dZ.cols());
  for (Eigen::Index b = 0; b < dZ.rows(); ++b) {
    const double n = fwd.projected.row(b).norm();
    const double proj = fwd.Z.row(b).dot(dZ.row(b));
    dy.row(b) = (dZ.row(b) - proj * fwd.Z.row(b)) / n;
  }
  const FrameMatrix &h_top = fwd.activations.back();
  grads->projection_weight.noalias() += h_top.transpose() * dy;
  if (params.projection.use_bias) grads->projection_bias += dy.colwise().sum().transpose();

  const auto &enc = params.encoder;
  const int L = static_cast<int>(enc.layers.size());
  if (L == enc.n_frozen) return;
  Matrix dh = dy * params.projection.weight.transpose();
  for (int l = L - 1; l >= enc.n_frozen; --l) {
    const FrameMatrix &out = fwd.activations[l + 1];
    const Matrix da = dh.array() * (1.0 - out.array().square());
    grads->encoder[l].weight.noalias() += fwd.activations[l].transpose() * da;
    grads->encoder[l].bias += da.colwise().sum().transpose();
    if (l > enc.n_frozen) dh = da * enc.layers[l].weight.transpose();
  }
}

}  // namespace

double SwappedLoss(const AssignmentMatrix &P, const AssignmentMatrix &Pt,
                   const AssignmentMatrix &Q, const AssignmentMatrix &Qt) {
  CheckSameShape(P, Pt, "P vs P~");
  CheckSameShape(P, Q, "P vs Q*");
  CheckSameShape(P, Qt, "P vs Q~*");
  if (P.rows() == 0) throw ConfigError("swapped loss: empty batch");
  const Matrix log_p = P.array().max(1e-300).log().matrix();
  const Matrix log_pt = Pt.array().max(1e-300).log().matrix();
  return SwappedLossFromLog(log_p, log_pt, Q, Qt);
}

ViewForward ForwardView(const FrameMatrix &frames, const ModelParams &params,
                        Precision precision) {
  ViewForward f;
  f.activations = EncodeLayers(frames, params.encoder);
  if (precision == Precision::kSingle)
    for (auto &a : f.activations) RoundToSingle(&a);
  f.projected = f.activations.back() * params.projection.weight;
  if (params.projection.use_bias) f.projected.rowwise() += params.projection.bias.transpose();
  f.Z = f.projected;
  for (Eigen::Index b = 0; b < f.Z.rows(); ++b) {
    const double n = f.Z.row(b).norm();
    if (!(n >= 1e-8))
      throw NumericError("forward: projected row " + std::to_string(b) + " has near-zero norm");
    f.Z.row(b) /= n;
  }
  if (precision == Precision::kSingle) RoundToSingle(&f.Z);
  f.log_p = CodeLogProbabilities(f.Z, params.codebook);
  f.P = f.log_p.array().exp().matrix();
  return f;
}

AssignmentMatrix ComputeTargets(const FrameMatrix &Z, const Codebook &codebook,
                                const TrainConfig &config) {
  if (config.target_mode == TargetMode::kArgmax) return ArgmaxTargets(Z, codebook);
  SinkhornConfig sc;
  sc.epsilon = config.epsilon;
  sc.n_iters = config.sinkhorn_iters;
  return SmoothTargets(Z, codebook, sc);
}

namespace {

LossAndGradients FinishStep(const ViewForward &orig, const ViewForward &pert,
                            const ModelParams &params, AssignmentMatrix Q, AssignmentMatrix Qt) {
  CheckSameShape(orig.P, pert.P, "P vs P~");
  CheckSameShape(orig.P, Q, "P vs Q*");
  CheckSameShape(orig.P, Qt, "P vs Q~*");
  LossAndGradients out;
  out.loss = SwappedLossFromLog(orig.log_p, pert.log_p, Q, Qt);
  out.grads = Gradients::ZerosLike(params);
  // P predicts the perturbed view's target, P~ the original's.
  BackwardView(orig, LogitGradient(orig.log_p, orig.P, Qt), params, &out.grads);
  BackwardView(pert, LogitGradient(pert.log_p, pert.P, Q), params, &out.grads);
  out.P = orig.P;
  out.Pt = pert.P;
  out.Q = std::move(Q);
  out.Qt = std::move(Qt);
  return out;
}

}  // namespace

LossAndGradients LossGradientsWithTargets(const FrameBatchPair &pair, const ModelParams &params,
                                          const AssignmentMatrix &Q, const AssignmentMatrix &Qt,
                                          Precision precision) {
  const ViewForward orig = ForwardView(pair.original, params, precision);
  const ViewForward pert = ForwardView(pair.perturbed, params, precision);
  return FinishStep(orig, pert, params, Q, Qt);
}

LossAndGradients LossGradients(const FrameBatchPair &pair, const ModelParams &params,
                               const TrainConfig &config) {
  const ViewForward orig = ForwardView(pair.original, params, config.precision);
  const ViewForward pert = ForwardView(pair.perturbed, params, config.precision);
  AssignmentMatrix Q = ComputeTargets(orig.Z, params.codebook, config);
  AssignmentMatrix Qt = ComputeTargets(pert.Z, params.codebook, config);
  LossAndGradients out = FinishStep(orig, pert, params, std::move(Q), std::move(Qt));
  const std::string bad = out.grads.FirstNonFinite();
  if (!bad.empty()) throw NumericError("non-finite gradient in " + bad);
  return out;
}

double LrSchedule(int step, const TrainConfig &config) {
  if (step < 0 || step > config.total_steps)
    throw ConfigError("lr_schedule: step " + std::to_string(step) + " outside [0, " +
                      std::to_string(config.total_steps) + "]");
  if (step <= config.warmup_steps) {
    if (config.warmup_steps == 0) return config.lr_peak;
    return config.lr_peak * static_cast<double>(step) / config.warmup_steps;
  }
  const double span = config.total_steps - config.warmup_steps;
  const double frac = (step - config.warmup_steps) / span;
  // Convex-combination form: exact at both ends of the decay.
  return (1.0 - frac) * config.lr_peak + frac * config.lr_final;
}

double ProcessedSpeechHours(double steps, double effective_batch_seconds) {
  return steps * effective_batch_seconds / 3600.0;
}

double CodebookUtilization(const std::vector<int> &code_ids, int K) {
  if (K < 1) throw ConfigError("codebook utilization: K must be >= 1");
  std::vector<bool> seen(K, false);
  int distinct = 0;
  for (int id : code_ids) {
    if (id < 0 || id >= K)
      throw DataError("codebook utilization: code id " + std::to_string(id) +
                      " outside [0, " + std::to_string(K) + ")");
    if (!seen[id]) {
      seen[id] = true;
      ++distinct;
    }
  }
  return static_cast<double>(distinct) / K;
}

double MeanDistributionEntropy(const AssignmentMatrix &P) {
  if (P.rows() == 0) return 0.0;
  const RowVector mean = P.colwise().mean();
  double h = 0.0;
  for (Eigen::Index k = 0; k < mean.size(); ++k)
    if (mean(k) > 0.0) h -= mean(k) * std::log(mean(k));
  return h;
}

AdamOptimizer::AdamOptimizer(const ModelParams &params, const TrainConfig &config)
    : beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      eps_(config.adam_eps),
      weight_decay_(config.weight_decay) {
  const Gradients z = Gradients::ZerosLike(params);
  for (int l = params.encoder.n_frozen; l < static_cast<int>(z.encoder.size()); ++l) {
    m_.push_back(z.encoder[l].weight);
    m_.push_back(z.encoder[l].bias);
  }
  m_.push_back(z.projection_weight);
  m_.push_back(z.projection_bias);
  m_.push_back(z.codewords);
  v_ = m_;
}

void AdamOptimizer::Update(Eigen::Ref<Matrix> p, const Matrix &g, Matrix *m, Matrix *v,
                           double lr, bool decay) {
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  m->array() = beta1_ * m->array() + (1.0 - beta1_) * g.array();
  v->array() = beta2_ * v->array() + (1.0 - beta2_) * g.array().square();
  if (decay && weight_decay_ > 0.0) p.array() -= lr * weight_decay_ * p.array();
  p.array() -= lr * (m->array() / c1) / ((v->array() / c2).sqrt() + eps_);
}

void AdamOptimizer::Step(ModelParams *params, const Gradients &grads, double lr) {
  ++t_;
  size_t slot = 0;
  auto as_col = [](Vector &v) { return Eigen::Map<Matrix>(v.data(), v.size(), 1); };
  auto &enc = params->encoder;
  for (int l = enc.n_frozen; l < static_cast<int>(enc.layers.size()); ++l) {
    Update(enc.layers[l].weight, grads.encoder[l].weight, &m_[slot], &v_[slot], lr, true);
    ++slot;
    Update(as_col(enc.layers[l].bias), grads.encoder[l].bias, &m_[slot], &v_[slot], lr, false);
    ++slot;
  }
  Update(params->projection.weight, grads.projection_weight, &m_[slot], &v_[slot], lr, true);
  ++slot;
  if (params->projection.use_bias)
    Update(as_col(params->projection.bias), grads.projection_bias, &m_[slot], &v_[slot], lr,
           false);
  ++slot;
  Update(params->codebook.codewords, grads.codewords, &m_[slot], &v_[slot], lr, false);
}

ModelParams InitModelForCorpus(const std::vector<FrameMatrix> &features,
                               const TrainConfig &config) {
  config.Validate();
  if (features.empty()) throw DataError("init: empty corpus");
  ModelDims dims;
  dims.input_dim = static_cast<int>(features.front().cols());
  dims.hidden_dim = config.hidden_dim;
  dims.n_layers = config.n_layers;
  dims.n_frozen = config.n_frozen;
  dims.K = config.K;
  dims.D = config.D;
  dims.tau = config.tau;
  dims.projection_bias = config.projection_bias;
  ModelParams params = InitParams(dims, config.seed);
  if (config.standardize_inputs) {
    const FrameMatrix all = StackFrames(features);
    const RowVector mean = all.colwise().mean();
    const RowVector var = (all.rowwise() - mean).colwise().squaredNorm() / all.rows();
    params.encoder.input_mean = mean;
    params.encoder.input_scale = var.array().max(1e-12).rsqrt().matrix();
  }
  return params;
}

FrameBatchPair MakeBatchPair(const CorpusManifest &corpus, const FrameBatch &batch,
                             const PerturbConfig &perturb, const FeatureConfig &features,
                             const SyntheticWorld *world, std::mt19937_64 *rng) {
  FrameBatchPair pair;
  pair.original = batch.frames;
  pair.labels = batch.labels;
  pair.speakers = batch.speakers;
  pair.perturbed.resize(batch.frames.rows(), batch.frames.cols());
  for (size_t i = 0; i < batch.utterances.size(); ++i) {
    const Utterance &u = corpus.utterances.at(batch.utterances[i]);
    const Eigen::Index rows = static_cast<Eigen::Index>(u.labels.size());
    const PerturbParams params = SamplePerturbParams(perturb, rng);
    FrameMatrix view;
    if (u.waveform) {
      const Waveform w = PerturbWaveform(*u.waveform, kSampleRate, params);
      Utterance tmp;
      tmp.id = u.id;
      tmp.labels = u.labels;
      tmp.waveform = w;
      view = UtteranceFeatures(tmp, features);
    } else if (world != nullptr) {
      const SpeakerTransform &voice = world->speakers().at(u.speaker);
      view = PerturbSynthetic(*world, batch.frames.middleRows(batch.offsets[i], rows), u.labels,
                              voice, ApplyToVoice(voice, params), rng);
    } else {
      throw DataError("utterance " + u.id +
                      ": no audio and no synthetic generator, cannot build a perturbed view");
    }
    pair.perturbed.middleRows(batch.offsets[i], rows) = view;
  }
  return pair;
}

TrainResult Train(const CorpusManifest &corpus, const TrainConfig &config,
                  const PerturbConfig &perturb, const FeatureConfig &feature_config,
                  const std::optional<ModelParams> &init) {
  config.Validate();
  perturb.Validate();
  corpus.Validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<FrameMatrix> features = CorpusFeatures(corpus, feature_config);

  std::optional<SyntheticWorld> world;
  if (corpus.synthetic && corpus.synthetic->mode == SynthesisMode::kFeature)
    world.emplace(*corpus.synthetic);

  TrainResult result;
  ModelParams params = init ? *init : InitModelForCorpus(features, config);
  if (params.codebook.K() != config.K || params.codebook.D() != config.D)
    throw ConfigError("train: initial parameters disagree with K/D of the config");
  AdamOptimizer adam(params, config);
  std::mt19937_64 perturb_rng(perturb.seed ^ (config.seed * 0x9e3779b97f4a7c15ULL));

  uint64_t epoch = 0;
  std::vector<BatchPlan> plans;
  size_t next = 0;
  for (int step = 1; step <= config.total_steps; ++step) {
    if (next == plans.size()) {
      plans = BatchFrames(corpus, config.batch_seconds, config.seed, epoch++);
      next = 0;
    }
    const FrameBatch batch = AssembleBatch(corpus, features, plans[next++]);
    const FrameBatchPair pair = MakeBatchPair(corpus, batch, perturb, feature_config,
                                              world ? &*world : nullptr, &perturb_rng);
    const double lr = LrSchedule(step, config);
    LossAndGradients lg;
    TrainRecord rec;
    rec.step = step;
    rec.lr = lr;
    try {
      lg = LossGradients(pair, params, config);
    } catch (const NumericError &e) {
      const TrainRecord last = result.log.records.empty() ? TrainRecord{} : result.log.records.back();
      throw NumericError(std::string(e.what()) + " at step " + std::to_string(step) +
                         " (last lr " + std::to_string(last.lr) + ", mean-P entropy " +
                         std::to_string(last.mean_p_entropy) + ", utilization " +
                         std::to_string(last.utilization) + ")");
    }
    rec.loss = lg.loss;
    rec.utilization = CodebookUtilization(QuantizeArgmax(lg.P), config.K);
    rec.mean_p_entropy = MeanDistributionEntropy(lg.P);
    if (!std::isfinite(lg.loss))
      throw NumericError("loss is NaN at step " + std::to_string(step) + " (lr " +
                         std::to_string(lr) + ", mean-P entropy " +
                         std::to_string(rec.mean_p_entropy) + ", utilization " +
                         std::to_string(rec.utilization) + ")");
    adam.Step(&params, lg.grads, lr);
    params.codebook.Renormalize();
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.log.records.push_back(rec);
  }
  result.checkpoint.params = std::move(params);
  result.checkpoint.step = static_cast<uint64_t>(config.total_steps);
  result.processed_speech_hours = ProcessedSpeechHours(config.total_steps, config.batch_seconds);
  return result;
}

}  // namespace spinlab
