// tools/spinlab.cc

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

// Command-line front end: corpus generation, perturbation, training,
// evaluation, full runs and reports.
//
// Exit codes: 0 success, 2 configuration error, 3 stage failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinlab/abx.h"
#include "spinlab/audio-io.h"
#include "spinlab/checkpoint.h"
#include "spinlab/corpus.h"
#include "spinlab/experiment.h"
#include "spinlab/features.h"
#include "spinlab/kmeans.h"
#include "spinlab/metrics.h"
#include "spinlab/perturb.h"
#include "spinlab/probe.h"
#include "spinlab/training.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinlab;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

// Relative output paths land under $SPINLAB_OUTPUT_ROOT when it is set.
fs::path OutputPath(const std::string &p) {
  fs::path out(p);
  if (out.is_relative()) {
    const char *env = std::getenv("SPINLAB_OUTPUT_ROOT");
    if (env != nullptr && *env != '\0') out = fs::path(env) / out;
  }
  return out;
}

void Log(const std::string &event, const json &params) {
  std::cerr << json{{"event", event}, {"params", params}}.dump() << "\n";
}

// Per-utterance features: the corpus's own, or dumps named <id>.fmat.
std::vector<FrameMatrix> LoadFeatures(const CorpusManifest &corpus, const std::string &dir) {
  if (dir.empty()) return CorpusFeatures(corpus);
  std::vector<FrameMatrix> out;
  for (const auto &u : corpus.utterances) {
    FrameMatrix f = ReadFeatureDump(fs::path(dir) / (u.id + ".fmat"));
    if (f.rows() != static_cast<Eigen::Index>(u.labels.size()))
      throw DataError("features for " + u.id + " have " + std::to_string(f.rows()) +
                      " rows, labels have " + std::to_string(u.labels.size()));
    out.push_back(std::move(f));
  }
  return out;
}

// Applies a checkpoint's representation (or one encoder layer) to features.
std::vector<FrameMatrix> ApplyModel(const std::vector<FrameMatrix> &features,
                                    const std::string &ckpt, const std::string &layer) {
  if (ckpt.empty()) return features;
  const Checkpoint c = LoadCheckpoint(ckpt);
  std::vector<FrameMatrix> out;
  for (const auto &f : features) {
    if (layer == "z") {
      out.push_back(Represent(f, c.params));
    } else {
      const int l = std::stoi(layer);
      auto acts = EncodeLayers(f, c.params.encoder);
      if (l < 0 || l >= static_cast<int>(acts.size()))
        throw ConfigError("layer " + layer + " out of range");
      out.push_back(std::move(acts[l]));
    }
  }
  return out;
}

SyntheticSpec LoadSpec(const std::string &path) {
  if (path.empty()) return {};
  const std::string text = ReadTextFile(path);
  json j = fs::path(path).extension() == ".json" ? json::parse(text) : TomlToJson(text);
  if (j.contains("corpus") && j["corpus"].contains("synthetic")) j = j["corpus"]["synthetic"];
  try {
    return j.get<SyntheticSpec>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string("spec: ") + e.what());
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"spinlab: speaker-invariant clustering laboratory"};
  app.require_subcommand(1);

  // gen-corpus
  auto *gen = app.add_subcommand("gen-corpus", "Generate a synthetic two-factor corpus");
  std::string gen_spec, gen_out;
  int64_t gen_seed = -1;
  std::string gen_mode;
  gen->add_option("--spec", gen_spec, "Synthetic spec (TOML or JSON)");
  gen->add_option("--seed", gen_seed, "Override the spec's seed");
  gen->add_option("--mode", gen_mode, "feature or audio")->check(CLI::IsMember({"feature", "audio"}));
  gen->add_option("--out", gen_out, "Output directory")->required();

  // perturb
  auto *pert = app.add_subcommand("perturb", "Speaker-perturb a 16 kHz WAV file");
  std::string pert_in, pert_out;
  double formant_ratio = 0.0, f0_ratio = 0.0;
  uint64_t pert_seed = 0;
  PerturbConfig pert_cfg;
  pert->add_option("--in", pert_in, "Input WAV")->required();
  pert->add_option("--out", pert_out, "Output WAV")->required();
  pert->add_option("--formant-ratio", formant_ratio, "Fixed formant ratio (no EQ)");
  pert->add_option("--f0-ratio", f0_ratio, "Fixed F0 ratio (no EQ)");
  pert->add_option("--seed", pert_seed, "Seed for sampled parameters");
  pert->add_option("--formant-hi", pert_cfg.formant_hi, "Upper formant ratio when sampling");
  pert->add_option("--f0-hi", pert_cfg.f0_hi, "Upper F0 ratio when sampling");
  pert->add_option("--invert-prob", pert_cfg.invert_prob, "Probability of inverting a ratio");
  pert->add_option("--eq-gain-db", pert_cfg.eq_gain_db, "EQ gain range in dB when sampling");

  // extract
  auto *ext = app.add_subcommand("extract", "Log-mel features of a WAV file");
  std::string ext_in, ext_out;
  ext->add_option("--in", ext_in, "Input WAV")->required();
  ext->add_option("--out", ext_out, "Output feature dump")->required();

  // train
  auto *train = app.add_subcommand("train", "Train on the corpus of a run config");
  std::string train_cfg, train_out;
  train->add_option("--config", train_cfg, "Run config (TOML)")->required();
  train->add_option("--out", train_out, "Output directory")->required();

  // eval-units / eval-abx / probe share corpus, features and model options.
  std::string ev_corpus, ev_features, ev_ckpt, ev_out, ev_layer = "z";
  int ev_kmeans = 0;
  uint64_t ev_seed = 0;
  int ev_triples = 2000;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--corpus", ev_corpus, "Corpus manifest")->required();
    sub->add_option("--features", ev_features, "Directory of <utterance-id>.fmat dumps");
    sub->add_option("--checkpoint", ev_ckpt, "Model checkpoint applied to the features");
    sub->add_option("--layer", ev_layer, "Encoder layer index or 'z'");
    sub->add_option("--seed", ev_seed, "Evaluation seed");
    sub->add_option("--out", ev_out, "Output JSON");
  };
  auto *units = app.add_subcommand("eval-units", "Purity and PNMI of discrete units");
  add_common(units);
  units->add_option("--kmeans", ev_kmeans, "Cluster features with K-means instead of the codebook");
  auto *abx = app.add_subcommand("eval-abx", "ABX phone discrimination");
  add_common(abx);
  abx->add_option("--triples", ev_triples, "Triples per regime");
  auto *probe = app.add_subcommand("probe", "Linear speaker-identification probe");
  add_common(probe);

  // run
  auto *run = app.add_subcommand("run", "Full pipeline: corpus, train, evaluate, plot");
  std::string run_cfg, run_out;
  run->add_option("--config", run_cfg, "Run config (TOML)")->required();
  run->add_option("--out", run_out, "Override output_dir");

  // report
  auto *rep = app.add_subcommand("report", "Comparison table over run directories");
  std::vector<std::string> rep_dirs;
  std::string rep_out;
  rep->add_option("runs", rep_dirs, "Run directories")->required();
  rep->add_option("--out", rep_out, "Write <out>.csv and <out>.md");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) {
      SyntheticSpec spec = LoadSpec(gen_spec);
      if (gen_seed >= 0) spec.seed = static_cast<uint64_t>(gen_seed);
      if (gen_mode == "audio") spec.mode = SynthesisMode::kAudio;
      if (gen_mode == "feature") spec.mode = SynthesisMode::kFeature;
      spec.Validate();
      Log("gen-corpus", spec);
      const CorpusManifest corpus = GenerateSyntheticCorpus(spec);
      std::cout << SaveCorpus(corpus, OutputPath(gen_out)).string() << "\n";
    } else if (*pert) {
      const Waveform in = ReadWav(pert_in);
      PerturbParams params;
      if (formant_ratio > 0.0 || f0_ratio > 0.0) {
        params.formant_ratio = formant_ratio > 0.0 ? formant_ratio : 1.0;
        params.f0_ratio = f0_ratio > 0.0 ? f0_ratio : 1.0;
      } else {
        pert_cfg.seed = pert_seed;
        pert_cfg.Validate();
        std::mt19937_64 rng(pert_seed);
        params = SamplePerturbParams(pert_cfg, &rng);
      }
      params.Validate();
      Log("perturb", params);
      WriteWav(OutputPath(pert_out), PerturbWaveform(in, kSampleRate, params));
    } else if (*ext) {
      const FrameMatrix f = ExtractFeatures(ReadWav(ext_in), FeatureConfig{});
      WriteFeatureDump(OutputPath(ext_out), f);
    } else if (*train) {
      const RunConfig cfg = LoadRunConfig(train_cfg);
      Log("train", cfg.ToJson());
      const fs::path dir = OutputPath(train_out);
      const CorpusManifest corpus = PrepareCorpus(cfg);
      const TrainResult r = Train(corpus, cfg.train, cfg.perturb);
      fs::create_directories(dir);
      SaveCheckpoint(dir / "checkpoint.bin", r.checkpoint);
      std::ostringstream log;
      r.log.WriteCsv(log);
      WriteTextFile(dir / "train_log.csv", log.str());
      json summary = {{"processed_speech_hours", r.processed_speech_hours},
                      {"steps", cfg.train.total_steps}};
      if (!r.log.records.empty()) {
        summary["final_loss"] = r.log.records.back().loss;
        summary["final_utilization"] = r.log.records.back().utilization;
      }
      WriteTextFile(dir / "summary.json", summary.dump(2) + "\n");
      std::cout << summary.dump(2) << "\n";
    } else if (*units || *abx || *probe) {
      const CorpusManifest corpus = LoadCorpus(ev_corpus);
      const auto base = LoadFeatures(corpus, ev_features);
      json result;
      if (*units) {
        std::vector<int> ids;
        int K = 0;
        if (ev_kmeans > 0) {
          const auto feats = ApplyModel(base, ev_ckpt, ev_layer);
          KMeansOptions ko;
          ko.seed = ev_seed;
          K = ev_kmeans;
          ids = KMeans(StackFrames(feats), K, ko).assignments;
        } else {
          if (ev_ckpt.empty()) throw ConfigError("eval-units needs --checkpoint or --kmeans");
          const Checkpoint c = LoadCheckpoint(ev_ckpt);
          K = c.params.codebook.K();
          ids = QuantizeArgmax(
              CodeProbabilities(Represent(StackFrames(base), c.params), c.params.codebook));
        }
        const auto table =
            Contingency(ids, StackLabels(corpus), static_cast<int>(corpus.phones.size()), K);
        const PurityMetrics m = ComputePurityMetrics(table);
        const CodePhoneHeatmap h = CodePhoneHeatmapFromTable(table);
        result = {{"cluster_purity", m.cluster_purity}, {"phone_purity", m.phone_purity},
                  {"pnmi", m.pnmi}, {"utilization", CodebookUtilization(ids, K)},
                  {"unused_codes", h.unused_codes}};
      } else if (*abx) {
        AbxTaskOptions ao;
        ao.triples_per_regime = ev_triples;
        ao.seed = ev_seed;
        const AbxTask task = BuildAbxTask(corpus, ao);
        const auto feats = ApplyModel(base, ev_ckpt, ev_layer);
        const AbxResult r = AbxError(TokenFeatures(feats, task.tokens), task);
        result = {{"within", r.within}, {"across", r.across}, {"n_within", r.n_within},
                  {"n_across", r.n_across}};
      } else {
        const auto feats = ApplyModel(base, ev_ckpt, ev_layer);
        const ProbeResult r = SpeakerProbe(StackFrames(feats), StackSpeakers(corpus), ev_seed);
        result = {{"accuracy", r.accuracy}, {"n_train", r.n_train}, {"n_test", r.n_test},
                  {"n_classes", r.n_classes}, {"chance", 1.0 / r.n_classes}};
      }
      if (!ev_out.empty()) WriteTextFile(OutputPath(ev_out), result.dump(2) + "\n");
      std::cout << result.dump(2) << "\n";
    } else if (*run) {
      RunConfig cfg = LoadRunConfig(run_cfg);
      if (!run_out.empty()) cfg.output_dir = OutputPath(run_out);
      Log("run", cfg.ToJson());
      std::cout << RunExperiment(cfg, ReadTextFile(run_cfg)).string() << "\n";
    } else if (*rep) {
      std::vector<fs::path> dirs(rep_dirs.begin(), rep_dirs.end());
      const auto rows = CollectReport(dirs);
      const std::string md = ReportMarkdown(rows);
      if (!rep_out.empty()) {
        const fs::path out = OutputPath(rep_out);
        WriteTextFile(out.string() + ".csv", ReportCsv(rows));
        WriteTextFile(out.string() + ".md", md);
      }
      std::cout << md;
    }
  } catch (const ConfigError &e) {
    std::cerr << "ERROR (spinlab): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "ERROR (spinlab): " << e.what() << "\n";
    return kExitStage;
  }
  return 0;
}
