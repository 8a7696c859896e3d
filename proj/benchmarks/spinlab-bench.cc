// benchmarks/spinlab-bench.cc

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

// Micro-benchmarks for the hot paths: balanced targets, one loss and
// gradient evaluation, the waveform perturbation, DTW and K-means.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "spinlab/abx.h"
#include "spinlab/kmeans.h"
#include "spinlab/perturb.h"
#include "spinlab/sinkhorn.h"
#include "spinlab/training.h"

namespace spinlab {
namespace {

Matrix Gaussian(Eigen::Index rows, Eigen::Index cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

Matrix UnitRows(Eigen::Index rows, Eigen::Index cols, uint64_t seed) {
  Matrix m = Gaussian(rows, cols, seed);
  m.rowwise().normalize();
  return m;
}

// Arguments: batch frames B, codebook size K.
void BM_SmoothTargets(benchmark::State &state) {
  const int B = static_cast<int>(state.range(0)), K = static_cast<int>(state.range(1));
  Codebook cb;
  cb.codewords = UnitRows(K, 16, 1);
  const FrameMatrix Z = UnitRows(B, 16, 2);
  SinkhornConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(SmoothTargets(Z, cb, cfg));
  state.SetItemsProcessed(state.iterations() * B);
}
BENCHMARK(BM_SmoothTargets)->Args({800, 64})->Args({12800, 256})->Unit(benchmark::kMillisecond);

void BM_SinkhornExact(benchmark::State &state) {
  const Matrix s = UnitRows(128, 8, 3) * UnitRows(16, 8, 4).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(SinkhornExact(s, 0.02, 1e-9));
}
BENCHMARK(BM_SinkhornExact)->Unit(benchmark::kMicrosecond);

// One training step's forward and backward pass at the acceptance size.
void BM_LossGradients(benchmark::State &state) {
  ModelDims dims;
  dims.K = static_cast<int>(state.range(0));
  dims.D = 10;
  const ModelParams params = InitParams(dims, 5);
  FrameBatchPair pair;
  pair.original = Gaussian(800, dims.input_dim, 6);
  pair.perturbed = pair.original + 0.3 * Gaussian(800, dims.input_dim, 7);
  pair.labels.assign(800, 0);
  pair.speakers.assign(800, 0);
  TrainConfig config;
  config.K = dims.K;
  config.D = dims.D;
  for (auto _ : state) benchmark::DoNotOptimize(LossGradients(pair, params, config));
}
BENCHMARK(BM_LossGradients)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PerturbWaveform(benchmark::State &state) {
  Waveform w(kSampleRate);
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<float>(0.3 * std::sin(2.0 * M_PI * 140.0 * i / kSampleRate));
  PerturbParams p;
  p.formant_ratio = 1.2;
  p.f0_ratio = state.range(0) ? 1.5 : 1.0;
  p.peaks = {{800.0, 400.0, 6.0}};
  for (auto _ : state) benchmark::DoNotOptimize(PerturbWaveform(w, kSampleRate, p));
  state.SetLabel(state.range(0) ? "pitch and formant" : "formant only");
}
BENCHMARK(BM_PerturbWaveform)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DtwAngularDistance(benchmark::State &state) {
  const Eigen::Index n = state.range(0);
  const Matrix a = Gaussian(n, 10, 8), b = Gaussian(n + 2, 10, 9);
  for (auto _ : state) benchmark::DoNotOptimize(DtwAngularDistance(a, b));
}
BENCHMARK(BM_DtwAngularDistance)->Arg(5)->Arg(20);

void BM_KMeans(benchmark::State &state) {
  const Matrix data = Gaussian(5000, 40, 10);
  KMeansOptions opt;
  opt.n_runs = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(KMeans(data, static_cast<int>(state.range(0)), opt));
}
BENCHMARK(BM_KMeans)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace spinlab

BENCHMARK_MAIN();
