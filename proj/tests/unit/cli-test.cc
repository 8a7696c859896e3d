// tests/unit/cli-test.cc

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
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "run-configs.h"
#include "spinlab/audio-io.h"
#include "spinlab/experiment.h"

namespace spinlab {
namespace {

namespace fs = std::filesystem;

struct CliOutput {
  int code = -1;
  std::string out, err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinlab-cli-" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliOutput Run(const std::string &args, const std::string &env = "") {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = env + " " + SPINLAB_CLI_PATH + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliOutput r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = ReadTextFile(out);
    r.err = ReadTextFile(err);
    return r;
  }

  fs::path WriteConfig(const std::string &name, int steps = 4) {
    const fs::path p = dir_ / (name + ".toml");
    WriteTextFile(p, testing::TinyRunToml(dir_ / name, steps));
    return p;
  }

  fs::path WriteSpec() {
    const fs::path p = dir_ / "spec.toml";
    WriteTextFile(p,
                  "n_phones = 4\nn_speakers = 3\nutterances_per_speaker = 2\n"
                  "phones_per_utterance = [3, 5]\nfeature_dim = 8\n");
    return p;
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Run("").code, 2);
  EXPECT_EQ(Run("frobnicate").code, 2);
  EXPECT_EQ(Run("run").code, 2);
  EXPECT_EQ(Run("run --config " + (dir_ / "missing.toml").string()).code, 2);
  EXPECT_EQ(Run("--help").code, 0);
}

TEST_F(CliTest, InvalidConfigExitsTwoWithMessage) {
  const fs::path p = dir_ / "bad.toml";
  WriteTextFile(p, testing::TinyRunToml(dir_ / "bad") + "\n[mystery]\n");
  const CliOutput r = Run("run --config " + p.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("mystery"), std::string::npos);
}

TEST_F(CliTest, RunIsRepeatableAndReportable) {
  const fs::path cfg = WriteConfig("run");
  const CliOutput a = Run("run --config " + cfg.string() + " --out " + (dir_ / "a").string());
  const CliOutput b = Run("run --config " + cfg.string() + " --out " + (dir_ / "b").string());
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(ReadTextFile(dir_ / "a" / "metrics.json"), ReadTextFile(dir_ / "b" / "metrics.json"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "config.toml"));

  const CliOutput rep =
      Run("report " + (dir_ / "a").string() + " --out " + (dir_ / "table").string());
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(rep.out.rfind("| run |", 0), 0u);
  EXPECT_TRUE(fs::exists(dir_ / "table.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "table.md"));
  EXPECT_EQ(Run("report " + (dir_ / "nowhere").string()).code, 3);
}

TEST_F(CliTest, OutputRootAppliesToRelativePaths) {
  const fs::path cfg = dir_ / "rel.toml";
  std::string text = testing::TinyRunToml("relative-run", 0);
  WriteTextFile(cfg, text);
  const CliOutput r = Run("run --config " + cfg.string(),
                          "SPINLAB_OUTPUT_ROOT=" + (dir_ / "root").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "root" / "relative-run" / "metrics.json"));
}

TEST_F(CliTest, CorpusTrainAndEvaluate) {
  const CliOutput gen =
      Run("gen-corpus --spec " + WriteSpec().string() + " --seed 4 --out " + (dir_ / "corpus").string());
  ASSERT_EQ(gen.code, 0) << gen.err;
  const fs::path manifest = dir_ / "corpus" / "manifest.json";
  ASSERT_TRUE(fs::exists(manifest));

  const CliOutput km = Run("eval-units --corpus " + manifest.string() + " --kmeans 4 --out " +
                           (dir_ / "km.json").string());
  ASSERT_EQ(km.code, 0) << km.err;
  const auto kmj = nlohmann::json::parse(ReadTextFile(dir_ / "km.json"));
  EXPECT_GE(kmj["pnmi"].get<double>(), 0.0);
  EXPECT_LE(kmj["pnmi"].get<double>(), 1.0);

  const CliOutput abx = Run("eval-abx --corpus " + manifest.string() + " --triples 30");
  ASSERT_EQ(abx.code, 0) << abx.err;
  EXPECT_EQ(nlohmann::json::parse(abx.out)["n_within"], 30);

  const CliOutput probe = Run("probe --corpus " + manifest.string());
  ASSERT_EQ(probe.code, 0) << probe.err;
  EXPECT_NEAR(nlohmann::json::parse(probe.out)["chance"].get<double>(), 1.0 / 3.0, 1e-12);

  const CliOutput train = Run("train --config " + WriteConfig("t").string() + " --out " +
                              (dir_ / "trained").string());
  ASSERT_EQ(train.code, 0) << train.err;
  const fs::path ckpt = dir_ / "trained" / "checkpoint.bin";
  EXPECT_TRUE(fs::exists(ckpt));
  EXPECT_TRUE(fs::exists(dir_ / "trained" / "train_log.csv"));
  const auto summary = nlohmann::json::parse(ReadTextFile(dir_ / "trained" / "summary.json"));
  EXPECT_NEAR(summary["processed_speech_hours"].get<double>(), 4.0 / 3600.0, 1e-15);

  // The trained model expects the run's own corpus geometry (8-dim features).
  const CliOutput units =
      Run("eval-units --corpus " + manifest.string() + " --checkpoint " + ckpt.string());
  ASSERT_EQ(units.code, 0) << units.err;
  EXPECT_TRUE(nlohmann::json::parse(units.out).contains("utilization"));
  const CliOutput layer = Run("probe --corpus " + manifest.string() + " --checkpoint " +
                              ckpt.string() + " --layer 1");
  EXPECT_EQ(layer.code, 0) << layer.err;
  EXPECT_NE(Run("probe --corpus " + manifest.string() + " --checkpoint " + ckpt.string() +
                " --layer 7")
                .code,
            0);
  EXPECT_EQ(Run("eval-units --corpus " + manifest.string()).code, 2);
  EXPECT_EQ(Run("eval-units --corpus " + (dir_ / "none.json").string() + " --kmeans 2").code, 3);
}

TEST_F(CliTest, PerturbPreservesLengthAndLogsParams) {
  Waveform w(8000);
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = static_cast<float>(0.3 * std::sin(2.0 * M_PI * 150.0 * i / 16000.0));
  const fs::path in = dir_ / "in.wav", out = dir_ / "out.wav";
  WriteWav(in, w);
  const CliOutput fixed = Run("perturb --in " + in.string() + " --out " + out.string() +
                              " --formant-ratio 1.2 --f0-ratio 0.9");
  ASSERT_EQ(fixed.code, 0) << fixed.err;
  EXPECT_EQ(ReadWav(out).size(), w.size());

  const CliOutput sampled = Run("perturb --in " + in.string() + " --out " + out.string() +
                                " --seed 7 --formant-hi 1.1 --f0-hi 1.3");
  ASSERT_EQ(sampled.code, 0) << sampled.err;
  const auto log = nlohmann::json::parse(sampled.err.substr(0, sampled.err.find('\n')));
  EXPECT_EQ(log["event"], "perturb");
  const double fr = log["params"]["formant_ratio"].get<double>();
  const double f0 = log["params"]["f0_ratio"].get<double>();
  EXPECT_LE(std::max(fr, 1.0 / fr), 1.1 + 1e-12);
  EXPECT_LE(std::max(f0, 1.0 / f0), 1.3 + 1e-12);

  EXPECT_EQ(Run("perturb --in " + in.string() + " --out " + out.string() + " --formant-hi 0.5")
                .code,
            2);
  WriteTextFile(dir_ / "junk.wav", "not audio");
  EXPECT_EQ(Run("perturb --in " + (dir_ / "junk.wav").string() + " --out " + out.string()).code,
            3);
}

}  // namespace
}  // namespace spinlab
