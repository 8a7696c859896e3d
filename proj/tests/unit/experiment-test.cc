// tests/unit/experiment-test.cc

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

#include <cstdlib>
#include <filesystem>

#include "run-configs.h"
#include "spinlab/experiment.h"

namespace spinlab {
namespace {

namespace fs = std::filesystem;

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spinlab-experiment-" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("SPINLAB_OUTPUT_ROOT");
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(ExperimentTest, ParsesTinyConfig) {
  const RunConfig c = ParseRunConfig(testing::TinyRunToml(dir_ / "run"), dir_);
  ASSERT_TRUE(c.synthetic.has_value());
  EXPECT_EQ(c.synthetic->n_phones, 4);
  EXPECT_EQ(c.synthetic->phones_per_utterance, std::make_pair(3, 5));
  EXPECT_EQ(c.train.K, 4);
  EXPECT_EQ(c.train.total_steps, 4);
  EXPECT_EQ(c.eval.abx_triples, 50);
  EXPECT_EQ(c.output_dir, dir_ / "run");
  EXPECT_EQ(c.train.tau, TrainConfig{}.tau);  // unspecified keys keep defaults
}

TEST_F(ExperimentTest, RejectsBadConfigs) {
  const std::string ok = testing::TinyRunToml(dir_ / "run");
  EXPECT_THROW(ParseRunConfig(ok + "\n[bogus]\nx = 1\n", dir_), ConfigError);
  EXPECT_THROW(ParseRunConfig("output_dir = \"x\"\n", dir_), ConfigError);
  EXPECT_THROW(ParseRunConfig("output_dir = \n", dir_), ConfigError);
  EXPECT_THROW(ParseRunConfig("output_dir = \"x\"\n[corpus]\nmanifest = \"nope.json\"\n", dir_),
               ConfigError);
  std::string unknown = ok;
  unknown.replace(unknown.find("K = 4"), 5, "Kay = 4");
  EXPECT_THROW(ParseRunConfig(unknown, dir_), ConfigError);
  std::string invalid = ok;
  invalid.replace(invalid.find("K = 4"), 5, "K = 0");
  EXPECT_THROW(ParseRunConfig(invalid, dir_), ConfigError);
  EXPECT_THROW(LoadRunConfig(dir_ / "missing.toml"), ConfigError);
}

TEST_F(ExperimentTest, ResolvesPaths) {
  WriteTextFile(dir_ / "data" / "m.json", "{}");
  const RunConfig c = ParseRunConfig(
      "output_dir = \"out\"\n[corpus]\nmanifest = \"data/m.json\"\n", dir_);
  EXPECT_EQ(c.manifest, dir_ / "data" / "m.json");
  EXPECT_EQ(c.output_dir, fs::path("out"));
  setenv("SPINLAB_OUTPUT_ROOT", (dir_ / "root").c_str(), 1);
  const RunConfig r = ParseRunConfig(
      "output_dir = \"out\"\n[corpus]\nmanifest = \"data/m.json\"\n", dir_);
  EXPECT_EQ(r.output_dir, dir_ / "root" / "out");
  unsetenv("SPINLAB_OUTPUT_ROOT");
}

TEST_F(ExperimentTest, TomlToJsonKeepsStructure) {
  const nlohmann::json j = TomlToJson("a = 1\nb = [1.5, 2]\n[t]\ns = \"x\"\nflag = true\n");
  EXPECT_EQ(j["a"], 1);
  EXPECT_EQ(j["b"][0], 1.5);
  EXPECT_EQ(j["t"]["s"], "x");
  EXPECT_EQ(j["t"]["flag"], true);
  EXPECT_THROW(TomlToJson("a = = 1"), ConfigError);
}

TEST_F(ExperimentTest, ZeroStepsGivesBaselineOnly) {
  const std::string text = testing::TinyRunToml(dir_ / "run", 0);
  const fs::path out = RunExperiment(ParseRunConfig(text, dir_), text);
  for (const char *f : {"config.toml", "config.resolved.json", "metrics.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  EXPECT_FALSE(fs::exists(out / "checkpoint.bin"));
  const auto m = nlohmann::json::parse(ReadTextFile(out / "metrics.json"));
  EXPECT_TRUE(m.contains("baseline"));
  EXPECT_TRUE(m["baseline"].contains("kmeans"));
  EXPECT_FALSE(m.contains("trained"));
}

TEST_F(ExperimentTest, TrainedRunWritesArtifactsAndIsDeterministic) {
  const std::string a = testing::TinyRunToml(dir_ / "a"), b = testing::TinyRunToml(dir_ / "b");
  const fs::path ra = RunExperiment(ParseRunConfig(a, dir_), a);
  const fs::path rb = RunExperiment(ParseRunConfig(b, dir_), b);
  for (const char *f : {"checkpoint.bin", "train_log.csv", "metrics.json", "utilization.svg",
                        "code_phone_heatmap.svg", "probe_layers.svg"})
    EXPECT_TRUE(fs::exists(ra / f)) << f;
  EXPECT_EQ(ReadTextFile(ra / "metrics.json"), ReadTextFile(rb / "metrics.json"));
  const auto m = nlohmann::json::parse(ReadTextFile(ra / "metrics.json"));
  EXPECT_TRUE(m["trained"].contains("units"));
  EXPECT_TRUE(m.contains("pnmi_delta"));
}

TEST_F(ExperimentTest, SweepWritesSubRunsAndCombinedPlot) {
  std::string text = testing::TinyRunToml(dir_ / "sweep", 2);
  text += "\n[sweep]\nK = [2, 4]\nseeds = [1, 2]\n";
  const fs::path out = RunExperiment(ParseRunConfig(text, dir_), text);
  for (const char *sub : {"K2_seed1", "K2_seed2", "K4_seed1", "K4_seed2"})
    EXPECT_TRUE(fs::exists(out / sub / "metrics.json")) << sub;
  EXPECT_TRUE(fs::exists(out / "pnmi_vs_k.svg"));
  const auto m = nlohmann::json::parse(ReadTextFile(out / "metrics.json"));
  ASSERT_EQ(m["by_K"].size(), 2u);
  EXPECT_EQ(m["by_K"][0]["K"], 2);
  const auto rows = CollectReport({out});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows.front().K, 2);
  EXPECT_EQ(rows.back().K, 4);
}

TEST_F(ExperimentTest, StageFailureNamesTheStageAndKeepsOutputs) {
  WriteTextFile(dir_ / "bad.json", "{ not json");
  const std::string text = "output_dir = \"" + (dir_ / "run").string() +
                           "\"\n[corpus]\nmanifest = \"bad.json\"\n";
  try {
    RunExperiment(ParseRunConfig(text, dir_), text);
    FAIL() << "expected StageError";
  } catch (const StageError &e) {
    EXPECT_EQ(e.stage(), "corpus");
    EXPECT_NE(std::string(e.what()).find("corpus"), std::string::npos);
  }
  EXPECT_TRUE(fs::exists(dir_ / "run" / "config.resolved.json"));
}

TEST_F(ExperimentTest, ReportRowsAndTables) {
  const std::string big = testing::TinyRunToml(dir_ / "k4");
  std::string small = testing::TinyRunToml(dir_ / "k2");
  small.replace(small.find("K = 4"), 5, "K = 2");
  RunExperiment(ParseRunConfig(big, dir_), big);
  RunExperiment(ParseRunConfig(small, dir_), small);
  const auto rows = CollectReport({dir_ / "k4", dir_ / "k2"});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].K, 2);
  EXPECT_EQ(rows[1].run, "k4");
  EXPECT_TRUE(rows[1].trained);
  EXPECT_NEAR(rows[1].pnmi_delta, rows[1].pnmi - rows[1].baseline_pnmi, 1e-15);
  EXPECT_NEAR(rows[1].processed_speech_hours, 4 * 1.0 / 3600.0, 1e-15);
  for (double v : {rows[1].cluster_purity, rows[1].phone_purity, rows[1].pnmi,
                   rows[1].utilization, rows[1].abx_within, rows[1].abx_across,
                   rows[1].probe_accuracy})
    EXPECT_FALSE(std::isnan(v));
  const std::string csv = ReportCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "run,K,seed,trained,cluster_purity,phone_purity,pnmi,baseline_pnmi,pnmi_delta,"
            "utilization,abx_within,abx_across,probe_accuracy,processed_speech_hours");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  const std::string md = ReportMarkdown(rows);
  EXPECT_EQ(md.rfind("| run | K |", 0), 0u);
  EXPECT_THROW(CollectReport({dir_ / "missing"}), DataError);
  EXPECT_THROW(CollectReport({}), ConfigError);
}

}  // namespace
}  // namespace spinlab
