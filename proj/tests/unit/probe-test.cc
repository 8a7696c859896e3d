// tests/unit/probe-test.cc

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

#include <random>

#include "spinlab/probe.h"

namespace spinlab {
namespace {

TEST(ProbeTest, OneHotSpeakersAreSeparable) {
  const int S = 5, N = 500;
  Matrix f = Matrix::Zero(N, S);
  std::vector<int> labels(N);
  for (int i = 0; i < N; ++i) {
    labels[i] = i % S;
    f(i, labels[i]) = 1.0;
  }
  const ProbeResult r = SpeakerProbe(f, labels, 0);
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.n_train, 400);
  EXPECT_EQ(r.n_test, 100);
  EXPECT_EQ(r.n_classes, S);
}

TEST(ProbeTest, NoiseIsAtChance) {
  const int S = 4, N = 8000;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix f(N, 6);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = n(rng);
  std::vector<int> labels(N);
  for (int i = 0; i < N; ++i) labels[i] = i % S;
  EXPECT_NEAR(SpeakerProbe(f, labels, 3).accuracy, 1.0 / S, 0.05);
}

TEST(ProbeTest, LinearlySeparableGaussians) {
  // Three classes whose means differ by 8 standard deviations.
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  const int N = 900;
  Matrix f(N, 2);
  std::vector<int> labels(N);
  for (int i = 0; i < N; ++i) {
    labels[i] = i % 3;
    f(i, 0) = 8.0 * labels[i] + n(rng);
    f(i, 1) = n(rng);
  }
  const ProbeResult r = SpeakerProbe(f, labels, 1);
  EXPECT_GT(r.accuracy, 0.99);
  EXPECT_GT(r.iterations, 0);
}

TEST(ProbeTest, DeterministicPerSplitSeed) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix f(300, 3);
  for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = n(rng);
  std::vector<int> labels(300);
  for (int i = 0; i < 300; ++i) labels[i] = (f(i, 0) + 0.5 * n(rng)) > 0 ? 1 : 0;
  const ProbeResult a = SpeakerProbe(f, labels, 5), b = SpeakerProbe(f, labels, 5);
  EXPECT_EQ(a.accuracy, b.accuracy);
  EXPECT_EQ(a.train_loss, b.train_loss);
}

TEST(ProbeTest, Errors) {
  EXPECT_THROW(SpeakerProbe(Matrix::Zero(10, 2), std::vector<int>(10, 1), 0), DataError);
  EXPECT_THROW(SpeakerProbe(Matrix::Zero(10, 2), std::vector<int>(9, 1), 0), ConfigError);
  EXPECT_THROW(SpeakerProbe(Matrix::Zero(1, 2), std::vector<int>{0}, 0), DataError);
}

}  // namespace
}  // namespace spinlab
