// core/include/spinlab/experiment.h

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

#ifndef SPINLAB_EXPERIMENT_H_
#define SPINLAB_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spinlab/corpus.h"
#include "spinlab/features.h"
#include "spinlab/model.h"
#include "spinlab/perturb.h"
#include "spinlab/training.h"

namespace spinlab {

struct EvalConfig {
  bool units = true;  // codebook units plus the K-means baseline
  bool abx = true;
  int abx_triples = 2000;  // per regime
  bool probe = true;
  bool probe_all_layers = true;  // otherwise only the final representation
  int probe_max_frames = 8000;   // evenly strided subsample
  int kmeans_runs = 3;
  uint64_t seed = 0;

  void Validate() const;
};

void to_json(nlohmann::json &j, const EvalConfig &c);
void from_json(const nlohmann::json &j, EvalConfig &c);

/// One experiment: corpus source, perturbation, training, evaluation and an
/// optional sweep over K and seeds.
struct RunConfig {
  std::optional<SyntheticSpec> synthetic;
  std::filesystem::path manifest;  // used when `synthetic` is empty
  PerturbConfig perturb;
  TrainConfig train;
  EvalConfig eval;
  std::vector<int> sweep_K;
  std::vector<uint64_t> sweep_seeds;
  std::filesystem::path output_dir;

  /// Schema and cross-field checks; also checks that the manifest exists.
  void Validate() const;
  nlohmann::json ToJson() const;
};

/// Parses the TOML run description. Relative paths are resolved against
/// `base_dir`, except output_dir which is resolved against
/// $SPINLAB_OUTPUT_ROOT when set. Unknown keys are rejected.
RunConfig ParseRunConfig(const std::string &toml_text, const std::filesystem::path &base_dir);
RunConfig LoadRunConfig(const std::filesystem::path &path);

/// Converts a TOML document to JSON (tables to objects, arrays to arrays).
nlohmann::json TomlToJson(const std::string &toml_text);

/// Error raised by a pipeline stage; what() carries the stage and cause.
class StageError : public Error {
 public:
  StageError(const std::string &stage, const std::string &cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(stage) {}
  const std::string &stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Generates or loads the corpus described by `config`.
CorpusManifest PrepareCorpus(const RunConfig &config);

/// Metrics that do not depend on training: K-means units on the input
/// features, ABX on the input features, and speaker probes on the input.
nlohmann::json BaselineMetrics(const CorpusManifest &corpus,
                               const std::vector<FrameMatrix> &features, int K,
                               const EvalConfig &eval);

/// Metrics of a model: codebook-unit purity and utilisation, ABX and layer
/// probes on its representations.
nlohmann::json ModelMetrics(const CorpusManifest &corpus, const std::vector<FrameMatrix> &features,
                            const ModelParams &params, const EvalConfig &eval);

/// Runs the whole pipeline and returns the run directory. With a sweep,
/// each (K, seed) gets a sub-directory and the top-level metrics.json
/// aggregates them. Stage failures raise StageError; files written so far
/// are kept.
std::filesystem::path RunExperiment(const RunConfig &config, const std::string &config_text = {});

struct ReportRow {
  std::string run;
  int K = 0;
  uint64_t seed = 0;
  double cluster_purity = 0.0, phone_purity = 0.0, pnmi = 0.0;
  double baseline_pnmi = 0.0, pnmi_delta = 0.0;
  double utilization = 0.0;
  double abx_within = 0.0, abx_across = 0.0;
  double probe_accuracy = 0.0;
  double processed_speech_hours = 0.0;
  bool trained = false;
};

/// One row per completed run (sweep directories expand to their sub-runs),
/// sorted by K. Throws DataError when a metrics file is missing.
std::vector<ReportRow> CollectReport(const std::vector<std::filesystem::path> &run_dirs);
std::string ReportCsv(const std::vector<ReportRow> &rows);
std::string ReportMarkdown(const std::vector<ReportRow> &rows);

/// Writes `text` to `path`, creating parent directories.
void WriteTextFile(const std::filesystem::path &path, const std::string &text);
std::string ReadTextFile(const std::filesystem::path &path);

}  // namespace spinlab

#endif  // SPINLAB_EXPERIMENT_H_
