// tests/unit/training-test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "grad-check.h"
#include "spinlab/training.h"

namespace spinlab {
namespace {

using testing::CheckGradients;
using testing::RandomGradCase;
using testing::RandomStochastic;

double NaiveSwappedLoss(const AssignmentMatrix &P, const AssignmentMatrix &Pt,
                        const AssignmentMatrix &Q, const AssignmentMatrix &Qt) {
  double s = 0.0;
  for (Eigen::Index b = 0; b < P.rows(); ++b)
    for (Eigen::Index k = 0; k < P.cols(); ++k)
      s += Qt(b, k) * std::log(std::max(P(b, k), 1e-30)) +
           Q(b, k) * std::log(std::max(Pt(b, k), 1e-30));
  return -s / (2.0 * P.rows());
}

double MeanRowEntropy(const AssignmentMatrix &Q) {
  double h = 0.0;
  for (Eigen::Index b = 0; b < Q.rows(); ++b)
    for (Eigen::Index k = 0; k < Q.cols(); ++k)
      if (Q(b, k) > 0.0) h -= Q(b, k) * std::log(Q(b, k));
  return h / Q.rows();
}

TEST(TrainConfigTest, DefaultsFollowTheReferenceRecipe) {
  const TrainConfig c;
  EXPECT_EQ(c.tau, 0.1);
  EXPECT_EQ(c.epsilon, 0.02);
  EXPECT_EQ(c.sinkhorn_iters, 3);
  EXPECT_EQ(c.batch_seconds, 256.0);
  EXPECT_EQ(c.total_steps, 5000);
  EXPECT_EQ(c.warmup_steps, 2500);
  EXPECT_EQ(c.lr_peak, 1e-4);
  EXPECT_EQ(c.lr_final, 1e-6);
  EXPECT_NO_THROW(c.Validate());
}

TEST(TrainConfigTest, ValidationListsEveryBadField) {
  TrainConfig c;
  c.warmup_steps = 6000;
  c.lr_final = 1e-3;
  c.tau = 0.0;
  try {
    c.Validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("warmup_steps"), std::string::npos);
    EXPECT_NE(msg.find("lr"), std::string::npos);
    EXPECT_NE(msg.find("tau"), std::string::npos);
  }
}

TEST(TrainConfigTest, JsonRoundTrip) {
  TrainConfig c;
  c.K = 17;
  c.target_mode = TargetMode::kArgmax;
  c.precision = Precision::kSingle;
  c.seed = 99;
  nlohmann::json j = c;
  EXPECT_EQ(j["target_mode"], "argmax");
  const TrainConfig d = j.get<TrainConfig>();
  EXPECT_EQ(nlohmann::json(d), j);
}

TEST(SwappedLossTest, PerfectOneHotPredictionIsZero) {
  AssignmentMatrix a = AssignmentMatrix::Zero(3, 4), b = AssignmentMatrix::Zero(3, 4);
  a(0, 1) = a(1, 3) = a(2, 0) = 1.0;
  b(0, 2) = b(1, 2) = b(2, 1) = 1.0;
  // P = Qt, Pt = Q.
  EXPECT_EQ(SwappedLoss(a, b, b, a), 0.0);
}

TEST(SwappedLossTest, UniformGivesLogK) {
  const AssignmentMatrix u = AssignmentMatrix::Constant(5, 7, 1.0 / 7);
  EXPECT_NEAR(SwappedLoss(u, u, u, u), std::log(7.0), 1e-12);
}

TEST(SwappedLossTest, MatchesNaiveDoubleSum) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const AssignmentMatrix P = RandomStochastic(3, 4, &rng), Pt = RandomStochastic(3, 4, &rng),
                           Q = RandomStochastic(3, 4, &rng), Qt = RandomStochastic(3, 4, &rng);
    EXPECT_NEAR(SwappedLoss(P, Pt, Q, Qt), NaiveSwappedLoss(P, Pt, Q, Qt), 1e-12);
  }
}

TEST(SwappedLossTest, SymmetricUnderViewSwap) {
  std::mt19937_64 rng(2);
  const AssignmentMatrix P = RandomStochastic(6, 5, &rng), Pt = RandomStochastic(6, 5, &rng),
                         Q = RandomStochastic(6, 5, &rng), Qt = RandomStochastic(6, 5, &rng);
  EXPECT_NEAR(SwappedLoss(P, Pt, Q, Qt), SwappedLoss(Pt, P, Qt, Q), 1e-14);
}

TEST(SwappedLossTest, BoundedBelowByTargetEntropy) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const AssignmentMatrix P = RandomStochastic(8, 6, &rng), Pt = RandomStochastic(8, 6, &rng),
                           Q = RandomStochastic(8, 6, &rng), Qt = RandomStochastic(8, 6, &rng);
    const double bound = 0.5 * (MeanRowEntropy(Q) + MeanRowEntropy(Qt));
    EXPECT_GE(SwappedLoss(P, Pt, Q, Qt), bound - 1e-9);
    // Equality when each prediction equals the target it is scored against.
    EXPECT_NEAR(SwappedLoss(Qt, Q, Q, Qt), bound, 1e-12);
  }
}

TEST(SwappedLossTest, FloorsTheLogarithm) {
  AssignmentMatrix P = AssignmentMatrix::Zero(1, 2), Q = AssignmentMatrix::Zero(1, 2);
  P(0, 0) = 1.0;
  Q(0, 1) = 1.0;
  // Each view puts all target mass on an entry with probability zero.
  EXPECT_NEAR(SwappedLoss(P, P, Q, Q), -std::log(1e-30), 1e-9);
}

TEST(SwappedLossTest, RejectsShapeMismatch) {
  const AssignmentMatrix a = AssignmentMatrix::Constant(2, 3, 1.0 / 3);
  const AssignmentMatrix b = AssignmentMatrix::Constant(2, 4, 0.25);
  EXPECT_THROW(SwappedLoss(a, a, a, b), ConfigError);
}

TEST(LossGradientsTest, MatchesCentralDifferences) {
  // Fresh seeds on each run; the seed is printed on failure.
  const uint64_t base = std::random_device{}();
  double worst = 0.0;
  for (uint64_t i = 0; i < 100; ++i) {
    const auto c = RandomGradCase(base + i);
    const auto r = CheckGradients(c);
    EXPECT_TRUE(r.frozen_exactly_zero) << "seed " << base + i;
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << base + i << " block " << r.worst_block;
    worst = std::max(worst, r.max_rel_error);
  }
  RecordProperty("max_rel_error", std::to_string(worst));
}

TEST(LossGradientsTest, FrozenBlocksAreExactlyZero) {
  ModelDims d;
  d.input_dim = 4;
  d.hidden_dim = 5;
  d.n_layers = 3;
  d.n_frozen = 2;
  d.K = 4;
  d.D = 3;
  const ModelParams p = InitParams(d, 7);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  FrameBatchPair pair;
  pair.original = FrameMatrix(6, 4);
  for (Eigen::Index i = 0; i < pair.original.size(); ++i) pair.original.data()[i] = n(rng);
  pair.perturbed = pair.original.array() + 0.1;
  TrainConfig config;
  config.K = 4;
  config.D = 3;
  const LossAndGradients lg = LossGradients(pair, p, config);
  for (int l = 0; l < 2; ++l) {
    EXPECT_EQ(lg.grads.encoder[l].weight.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(lg.grads.encoder[l].bias.cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_GT(lg.grads.encoder[2].weight.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LossGradientsTest, TangentCodewordGradientMatchesRenormalizedDifferences) {
  // With codewords renormalised after every step, only the component of the
  // gradient orthogonal to c_k matters. Compare it against central
  // differences of L(c / |c|).
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = RandomGradCase(1000 + seed);
    const LossAndGradients lg = LossGradientsWithTargets(c.pair, c.params, c.Q, c.Qt);
    ModelParams p = c.params;
    const double h = 1e-6;
    for (int k = 0; k < p.codebook.K(); ++k) {
      const RowVector ck = c.params.codebook.codewords.row(k);
      const RowVector g = lg.grads.codewords.row(k);
      const RowVector tangent = g - g.dot(ck) * ck;
      for (int d = 0; d < p.codebook.D(); ++d) {
        auto loss_at = [&](double delta) {
          RowVector v = ck;
          v(d) += delta;
          p.codebook.codewords.row(k) = v / v.norm();
          return LossGradientsWithTargets(c.pair, p, c.Q, c.Qt).loss;
        };
        const double numeric = (loss_at(h) - loss_at(-h)) / (2.0 * h);
        p.codebook.codewords.row(k) = ck;
        EXPECT_LE(testing::GradRelError(tangent(d), numeric), 1e-4) << seed << " " << k;
      }
    }
  }
}

TEST(LossGradientsTest, SinglePrecisionStaysCloseToDouble) {
  const auto c = RandomGradCase(5);
  const auto a = LossGradientsWithTargets(c.pair, c.params, c.Q, c.Qt, Precision::kDouble);
  const auto b = LossGradientsWithTargets(c.pair, c.params, c.Q, c.Qt, Precision::kSingle);
  EXPECT_NEAR(a.loss, b.loss, 1e-5 * std::max(1.0, a.loss));
}

TEST(LrScheduleTest, ReferenceAnchorPoints) {
  const TrainConfig c;
  EXPECT_EQ(LrSchedule(0, c), 0.0);
  EXPECT_EQ(LrSchedule(2500, c), 1e-4);
  EXPECT_EQ(LrSchedule(5000, c), 1e-6);
  EXPECT_NEAR(LrSchedule(1250, c), 5e-5, 1e-18);
  EXPECT_NEAR(LrSchedule(3750, c), 0.5 * (1e-4 + 1e-6), 1e-18);
}

TEST(LrScheduleTest, RejectsOutOfRangeSteps) {
  const TrainConfig c;
  EXPECT_THROW(LrSchedule(-1, c), ConfigError);
  EXPECT_THROW(LrSchedule(5001, c), ConfigError);
}

TEST(LrScheduleTest, ZeroWarmupStartsAtPeak) {
  TrainConfig c;
  c.warmup_steps = 0;
  c.total_steps = 10;
  EXPECT_EQ(LrSchedule(0, c), c.lr_peak);
  EXPECT_EQ(LrSchedule(10, c), c.lr_final);
}

TEST(ProcessedSpeechHoursTest, TableArithmetic) {
  EXPECT_EQ(std::lround(ProcessedSpeechHours(5000, 256.0)), 356);
  EXPECT_NEAR(ProcessedSpeechHours(5000, 256.0), 355.5556, 1e-4);
  EXPECT_EQ(ProcessedSpeechHours(0, 256.0), 0.0);
  EXPECT_EQ(ProcessedSpeechHours(1, 3600.0), 1.0);
}

TEST(CodebookUtilizationTest, CountsDistinctIds) {
  EXPECT_DOUBLE_EQ(CodebookUtilization(std::vector<int>(50, 0), 8), 1.0 / 8);
  std::vector<int> all(8);
  for (int k = 0; k < 8; ++k) all[k] = k;
  EXPECT_EQ(CodebookUtilization(all, 8), 1.0);
  EXPECT_THROW(CodebookUtilization({0, 8}, 8), DataError);
  EXPECT_THROW(CodebookUtilization({-1}, 8), DataError);
}

TEST(CodebookUtilizationTest, MatchesSetCount) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<int> ids(100000);
  for (int &i : ids) i = u(rng) % 200;  // leave some codewords unused
  const std::set<int> distinct(ids.begin(), ids.end());
  EXPECT_DOUBLE_EQ(CodebookUtilization(ids, 256), distinct.size() / 256.0);
}

TEST(MeanDistributionEntropyTest, UniformAndOneHot) {
  EXPECT_NEAR(MeanDistributionEntropy(AssignmentMatrix::Constant(4, 8, 0.125)), std::log(8.0),
              1e-12);
  AssignmentMatrix one_hot = AssignmentMatrix::Zero(4, 8);
  one_hot.col(3).setOnes();
  EXPECT_EQ(MeanDistributionEntropy(one_hot), 0.0);
}

TEST(AdamOptimizerTest, FirstStepMovesEachEntryByLr) {
  // With bias correction the first Adam step is lr * sign(g) (up to eps).
  ModelDims d;
  d.input_dim = 3;
  d.hidden_dim = 3;
  d.n_layers = 2;
  d.n_frozen = 1;
  d.K = 3;
  d.D = 2;
  ModelParams p = InitParams(d, 3);
  const ModelParams before = p;
  TrainConfig c;
  AdamOptimizer opt(p, c);
  Gradients g = Gradients::ZerosLike(p);
  g.encoder[1].weight.setConstant(2.0);
  g.projection_weight.setConstant(-0.5);
  g.codewords.setConstant(1.0);
  g.encoder[0].weight.setConstant(7.0);  // frozen: must be ignored
  opt.Step(&p, g, 1e-3);
  EXPECT_EQ(opt.steps(), 1);
  EXPECT_EQ(p.encoder.layers[0], before.encoder.layers[0]);
  EXPECT_LE(((p.encoder.layers[1].weight - before.encoder.layers[1].weight).array() + 1e-3)
                .abs()
                .maxCoeff(),
            1e-9);
  EXPECT_LE(((p.projection.weight - before.projection.weight).array() - 1e-3).abs().maxCoeff(),
            1e-9);
  EXPECT_EQ(p.encoder.layers[1].bias, before.encoder.layers[1].bias);
}

TEST(AdamOptimizerTest, WeightDecayIsDecoupledAndSkipsBiases) {
  ModelDims d;
  d.input_dim = 2;
  d.hidden_dim = 2;
  d.n_layers = 1;
  d.n_frozen = 0;
  d.K = 2;
  d.D = 2;
  ModelParams p = InitParams(d, 4);
  p.encoder.layers[0].bias.setConstant(0.5);
  const ModelParams before = p;
  TrainConfig c;
  c.weight_decay = 0.1;
  AdamOptimizer opt(p, c);
  opt.Step(&p, Gradients::ZerosLike(p), 0.01);
  EXPECT_LE((p.encoder.layers[0].weight - (1.0 - 0.001) * before.encoder.layers[0].weight)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_EQ(p.encoder.layers[0].bias, before.encoder.layers[0].bias);
}

class TrainLoopTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticSpec spec;
    spec.n_phones = 6;
    spec.n_speakers = 3;
    spec.utterances_per_speaker = 3;
    spec.phones_per_utterance = {8, 12};
    spec.seed = 5;
    corpus_ = GenerateSyntheticCorpus(spec);
    config_.K = 8;
    config_.D = 4;
    config_.hidden_dim = 8;
    config_.batch_seconds = 2.0;
    config_.total_steps = 20;
    config_.warmup_steps = 2;
    config_.lr_peak = 1e-2;
    config_.lr_final = 1e-4;
    config_.seed = 3;
    perturb_.seed = 4;
  }
  CorpusManifest corpus_;
  TrainConfig config_;
  PerturbConfig perturb_;
};

TEST_F(TrainLoopTest, ZeroStepsReturnsInitialization) {
  config_.total_steps = 0;
  config_.warmup_steps = 0;
  const TrainResult r = Train(corpus_, config_, perturb_);
  const ModelParams init = InitModelForCorpus(CorpusFeatures(corpus_), config_);
  EXPECT_EQ(r.checkpoint.params, init);
  EXPECT_EQ(r.checkpoint.step, 0u);
  EXPECT_TRUE(r.log.records.empty());
  EXPECT_EQ(r.processed_speech_hours, 0.0);
}

TEST_F(TrainLoopTest, DeterministicLossColumn) {
  const TrainResult a = Train(corpus_, config_, perturb_);
  const TrainResult b = Train(corpus_, config_, perturb_);
  ASSERT_EQ(a.log.records.size(), 20u);
  for (size_t i = 0; i < a.log.records.size(); ++i) {
    EXPECT_EQ(a.log.records[i].loss, b.log.records[i].loss);
    EXPECT_EQ(a.log.records[i].step, static_cast<int>(i) + 1);
  }
  EXPECT_EQ(a.checkpoint, b.checkpoint);
}

TEST_F(TrainLoopTest, FrozenLayersAndCorpusAreUntouched) {
  const nlohmann::json corpus_before = ManifestToJson(corpus_);
  const ModelParams init = InitModelForCorpus(CorpusFeatures(corpus_), config_);
  const TrainResult r = Train(corpus_, config_, perturb_);
  EXPECT_EQ(r.checkpoint.params.encoder.layers[0], init.encoder.layers[0]);
  EXPECT_FALSE(r.checkpoint.params.encoder.layers[2] == init.encoder.layers[2]);
  EXPECT_EQ(ManifestToJson(corpus_), corpus_before);
  EXPECT_LE(r.checkpoint.params.codebook.MaxNormError(), 1e-6);
}

TEST_F(TrainLoopTest, LogRecordsScheduleAndHours) {
  const TrainResult r = Train(corpus_, config_, perturb_);
  for (const TrainRecord &rec : r.log.records) {
    EXPECT_EQ(rec.lr, LrSchedule(rec.step, config_));
    EXPECT_GT(rec.utilization, 0.0);
    EXPECT_LE(rec.utilization, 1.0);
    EXPECT_TRUE(std::isfinite(rec.loss));
  }
  EXPECT_DOUBLE_EQ(r.processed_speech_hours, ProcessedSpeechHours(20, 2.0));
  std::ostringstream os;
  r.log.WriteCsv(os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "step,loss,lr,utilization,mean_p_entropy,wall_clock_s");
}

TEST_F(TrainLoopTest, WaveformCorpusTrains) {
  SyntheticSpec spec;
  spec.mode = SynthesisMode::kAudio;
  spec.n_phones = 4;
  spec.n_speakers = 2;
  spec.utterances_per_speaker = 2;
  spec.phones_per_utterance = {4, 6};
  spec.seed = 8;
  const CorpusManifest audio = GenerateSyntheticCorpus(spec);
  config_.total_steps = 3;
  config_.warmup_steps = 1;
  config_.D = 3;
  config_.K = 4;
  const TrainResult r = Train(audio, config_, perturb_);
  EXPECT_EQ(r.log.records.size(), 3u);
  for (const TrainRecord &rec : r.log.records) EXPECT_TRUE(std::isfinite(rec.loss));
}

TEST_F(TrainLoopTest, MakeBatchPairKeepsLabelsAndShape) {
  const std::vector<FrameMatrix> feats = CorpusFeatures(corpus_);
  const auto plans = BatchFrames(corpus_, 2.0, 1);
  const FrameBatch batch = AssembleBatch(corpus_, feats, plans.front());
  const SyntheticWorld world(*corpus_.synthetic);
  std::mt19937_64 rng(1);
  const FrameBatchPair pair = MakeBatchPair(corpus_, batch, perturb_, {}, &world, &rng);
  EXPECT_EQ(pair.labels, batch.labels);
  EXPECT_EQ(pair.original, batch.frames);
  EXPECT_EQ(pair.perturbed.rows(), batch.frames.rows());
  EXPECT_GT((pair.perturbed - pair.original).norm(), 0.0);
  EXPECT_THROW(MakeBatchPair(corpus_, batch, perturb_, {}, nullptr, &rng), DataError);
}

}  // namespace
}  // namespace spinlab
