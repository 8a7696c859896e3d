// core/src/experiment.cc

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

#include "spinlab/experiment.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "spinlab/abx.h"
#include "spinlab/checkpoint.h"
#include "spinlab/kmeans.h"
#include "spinlab/metrics.h"
#include "spinlab/probe.h"
#include "spinlab/svg-plot.h"

namespace spinlab {

namespace fs = std::filesystem;
using nlohmann::json;

void EvalConfig::Validate() const {
  if (abx_triples < 1) throw ConfigError("eval: abx_triples must be >= 1");
  if (probe_max_frames < 10) throw ConfigError("eval: probe_max_frames must be >= 10");
  if (kmeans_runs < 1) throw ConfigError("eval: kmeans_runs must be >= 1");
}

void to_json(json &j, const EvalConfig &c) {
  j = {{"units", c.units},
       {"abx", c.abx},
       {"abx_triples", c.abx_triples},
       {"probe", c.probe},
       {"probe_all_layers", c.probe_all_layers},
       {"probe_max_frames", c.probe_max_frames},
       {"kmeans_runs", c.kmeans_runs},
       {"seed", c.seed}};
}

void from_json(const json &j, EvalConfig &c) {
  const EvalConfig d;
  c.units = j.value("units", d.units);
  c.abx = j.value("abx", d.abx);
  c.abx_triples = j.value("abx_triples", d.abx_triples);
  c.probe = j.value("probe", d.probe);
  c.probe_all_layers = j.value("probe_all_layers", d.probe_all_layers);
  c.probe_max_frames = j.value("probe_max_frames", d.probe_max_frames);
  c.kmeans_runs = j.value("kmeans_runs", d.kmeans_runs);
  c.seed = j.value("seed", d.seed);
}

void RunConfig::Validate() const {
  if (!synthetic && manifest.empty())
    throw ConfigError("corpus: give either a manifest path or a [corpus.synthetic] table");
  if (synthetic) synthetic->Validate();
  if (!synthetic && !fs::exists(manifest))
    throw ConfigError("corpus: manifest '" + manifest.string() + "' does not exist");
  perturb.Validate();
  train.Validate();
  eval.Validate();
  for (int k : sweep_K)
    if (k < 1) throw ConfigError("sweep: every K must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
}

json RunConfig::ToJson() const {
  json j;
  if (synthetic)
    j["corpus"] = {{"synthetic", *synthetic}};
  else
    j["corpus"] = {{"manifest", manifest.string()}};
  j["perturb"] = perturb;
  j["train"] = train;
  j["eval"] = eval;
  j["sweep"] = {{"K", sweep_K}, {"seeds", sweep_seeds}};
  j["output_dir"] = output_dir.string();
  return j;
}

namespace {

json NodeToJson(const toml::node &node) {
  if (const auto *t = node.as_table()) {
    json out = json::object();
    for (const auto &[k, v] : *t) out[std::string(k.str())] = NodeToJson(v);
    return out;
  }
  if (const auto *a = node.as_array()) {
    json out = json::array();
    for (const auto &v : *a) out.push_back(NodeToJson(v));
    return out;
  }
  if (const auto *v = node.as_integer()) return v->get();
  if (const auto *v = node.as_floating_point()) return v->get();
  if (const auto *v = node.as_boolean()) return v->get();
  if (const auto *v = node.as_string()) return v->get();
  throw ConfigError("config: dates and times are not supported values");
}

void CheckKeys(const json &section, const json &defaults, const std::string &name) {
  if (!section.is_object()) throw ConfigError("config: [" + name + "] must be a table");
  for (const auto &[k, v] : section.items())
    if (!defaults.contains(k)) throw ConfigError("config: unknown key '" + k + "' in [" + name + "]");
}

template <typename T>
T SectionAs(const json &root, const char *name) {
  T value{};
  if (!root.contains(name)) return value;
  CheckKeys(root.at(name), json(T{}), name);
  try {
    value = root.at(name).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: [") + name + "]: " + e.what());
  }
  return value;
}

}  // namespace

json TomlToJson(const std::string &toml_text) {
  try {
    return NodeToJson(toml::parse(toml_text));
  } catch (const toml::parse_error &e) {
    std::ostringstream os;
    os << "config: TOML parse error at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(os.str());
  }
}

RunConfig ParseRunConfig(const std::string &toml_text, const fs::path &base_dir) {
  const json root = TomlToJson(toml_text);
  static const std::set<std::string> kSections = {"output_dir", "corpus", "perturb",
                                                  "train", "eval", "sweep"};
  for (const auto &[k, v] : root.items())
    if (!kSections.count(k)) throw ConfigError("config: unknown top-level key '" + k + "'");

  RunConfig c;
  if (!root.contains("corpus")) throw ConfigError("config: missing [corpus] section");
  const json &corpus = root.at("corpus");
  CheckKeys(corpus, json{{"manifest", ""}, {"synthetic", json::object()}}, "corpus");
  if (corpus.contains("manifest") == corpus.contains("synthetic"))
    throw ConfigError("config: [corpus] needs exactly one of 'manifest' or [corpus.synthetic]");
  try {
    if (corpus.contains("synthetic")) {
      CheckKeys(corpus.at("synthetic"), json(SyntheticSpec{}), "corpus.synthetic");
      c.synthetic = corpus.at("synthetic").get<SyntheticSpec>();
    } else {
      const fs::path m = corpus.at("manifest").get<std::string>();
      c.manifest = m.is_absolute() ? m : base_dir / m;
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: [corpus]: ") + e.what());
  }
  c.perturb = SectionAs<PerturbConfig>(root, "perturb");
  c.train = SectionAs<TrainConfig>(root, "train");
  c.eval = SectionAs<EvalConfig>(root, "eval");
  if (root.contains("sweep")) {
    const json &s = root.at("sweep");
    CheckKeys(s, json{{"K", 0}, {"seeds", 0}}, "sweep");
    try {
      c.sweep_K = s.value("K", std::vector<int>{});
      c.sweep_seeds = s.value("seeds", std::vector<uint64_t>{});
    } catch (const json::exception &e) {
      throw ConfigError(std::string("config: [sweep]: ") + e.what());
    }
  }
  if (!root.contains("output_dir") || !root.at("output_dir").is_string())
    throw ConfigError("config: output_dir (string) is required");
  fs::path out = root.at("output_dir").get<std::string>();
  if (out.is_relative()) {
    const char *env = std::getenv("SPINLAB_OUTPUT_ROOT");
    if (env != nullptr && *env != '\0') out = fs::path(env) / out;
  }
  c.output_dir = out;
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const fs::path &path) {
  if (!fs::exists(path)) throw ConfigError("config file '" + path.string() + "' does not exist");
  return ParseRunConfig(ReadTextFile(path), path.parent_path());
}

void WriteTextFile(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw DataError("write to '" + path.string() + "' failed");
}

std::string ReadTextFile(const fs::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

CorpusManifest PrepareCorpus(const RunConfig &config) {
  if (config.synthetic) return GenerateSyntheticCorpus(*config.synthetic);
  return LoadCorpus(config.manifest);
}

namespace {

json PurityJson(const PurityMetrics &m) {
  return {{"cluster_purity", m.cluster_purity},
          {"phone_purity", m.phone_purity},
          {"pnmi", m.pnmi}};
}

json AbxJson(const AbxResult &r) {
  return {{"within", r.within}, {"across", r.across}, {"n_within", r.n_within},
          {"n_across", r.n_across}};
}

// Evenly strided subsample used for the probes.
std::pair<Matrix, std::vector<int>> ProbeSubsample(const Matrix &x, const std::vector<int> &y,
                                                   int max_frames) {
  const Eigen::Index n = x.rows();
  const Eigen::Index stride = std::max<Eigen::Index>(1, (n + max_frames - 1) / max_frames);
  const Eigen::Index m = (n + stride - 1) / stride;
  Matrix xs(m, x.cols());
  std::vector<int> ys(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    xs.row(i) = x.row(i * stride);
    ys[i] = y[i * stride];
  }
  return {std::move(xs), std::move(ys)};
}

double ProbeAccuracy(const Matrix &x, const std::vector<int> &speakers, const EvalConfig &eval) {
  auto [xs, ys] = ProbeSubsample(x, speakers, eval.probe_max_frames);
  return SpeakerProbe(xs, ys, eval.seed).accuracy;
}

std::vector<FrameMatrix> RepresentAll(const std::vector<FrameMatrix> &features,
                                      const ModelParams &params) {
  std::vector<FrameMatrix> out;
  out.reserve(features.size());
  for (const auto &f : features) out.push_back(Represent(f, params));
  return out;
}

json ProbeLayers(const FrameMatrix &stacked, const std::vector<int> &speakers,
                 const ModelParams &params, const EvalConfig &eval) {
  json j = json::object();
  if (eval.probe_all_layers) {
    const auto acts = EncodeLayers(stacked, params.encoder);
    for (size_t l = 0; l < acts.size(); ++l)
      j["layer" + std::to_string(l)] = ProbeAccuracy(acts[l], speakers, eval);
  }
  j["z"] = ProbeAccuracy(Represent(stacked, params), speakers, eval);
  return j;
}

}  // namespace

json BaselineMetrics(const CorpusManifest &corpus, const std::vector<FrameMatrix> &features,
                     int K, const EvalConfig &eval) {
  const FrameMatrix stacked = StackFrames(features);
  const std::vector<int> labels = StackLabels(corpus);
  json j = json::object();
  if (eval.units) {
    KMeansOptions ko;
    ko.n_runs = eval.kmeans_runs;
    ko.seed = eval.seed;
    const KMeansResult km = KMeans(stacked, K, ko);
    const auto table =
        Contingency(km.assignments, labels, static_cast<int>(corpus.phones.size()), K);
    j["kmeans"] = PurityJson(ComputePurityMetrics(table));
    j["kmeans"]["inertia"] = km.inertia;
    j["kmeans"]["utilization"] = CodebookUtilization(km.assignments, K);
  }
  if (eval.abx) {
    AbxTaskOptions ao;
    ao.triples_per_regime = eval.abx_triples;
    ao.seed = eval.seed;
    const AbxTask task = BuildAbxTask(corpus, ao);
    j["abx"] = AbxJson(AbxError(TokenFeatures(features, task.tokens), task));
  }
  if (eval.probe) j["probe_input"] = ProbeAccuracy(stacked, StackSpeakers(corpus), eval);
  return j;
}

json ModelMetrics(const CorpusManifest &corpus, const std::vector<FrameMatrix> &features,
                  const ModelParams &params, const EvalConfig &eval) {
  const FrameMatrix stacked = StackFrames(features);
  const std::vector<int> labels = StackLabels(corpus);
  const int K = params.codebook.K();
  json j = json::object();
  if (eval.units) {
    const FrameMatrix Z = Represent(stacked, params);
    const std::vector<int> ids = QuantizeArgmax(CodeProbabilities(Z, params.codebook));
    const auto table = Contingency(ids, labels, static_cast<int>(corpus.phones.size()), K);
    j["units"] = PurityJson(ComputePurityMetrics(table));
    j["units"]["utilization"] = CodebookUtilization(ids, K);
  }
  if (eval.abx) {
    AbxTaskOptions ao;
    ao.triples_per_regime = eval.abx_triples;
    ao.seed = eval.seed;
    const AbxTask task = BuildAbxTask(corpus, ao);
    j["abx"] = AbxJson(AbxError(TokenFeatures(RepresentAll(features, params), task.tokens), task));
  }
  if (eval.probe) j["probe"] = ProbeLayers(stacked, StackSpeakers(corpus), params, eval);
  return j;
}

namespace {

template <typename F>
auto Stage(const std::string &name, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError &) {
    throw;
  } catch (const std::exception &e) {
    throw StageError(name, e.what());
  }
}

std::string DumpJson(const json &j) { return j.dump(2) + "\n"; }

void WritePlots(const fs::path &dir, const CorpusManifest &corpus,
                const std::vector<FrameMatrix> &features, const TrainResult *trained,
                const json &metrics) {
  if (trained != nullptr && !trained->log.records.empty()) {
    LinePlotSpec s;
    s.title = "Codebook utilization during training";
    s.x_label = "step";
    s.y_label = "utilization (batch)";
    PlotSeries u{"utilization", {}, {}};
    for (const auto &r : trained->log.records) {
      u.x.push_back(r.step);
      u.y.push_back(r.utilization);
    }
    s.series.push_back(std::move(u));
    WriteTextFile(dir / "utilization.svg", RenderLinePlot(s));
  }
  if (trained != nullptr && metrics.contains("trained") && metrics["trained"].contains("units")) {
    const ModelParams &p = trained->checkpoint.params;
    const FrameMatrix Z = Represent(StackFrames(features), p);
    const auto ids = QuantizeArgmax(CodeProbabilities(Z, p.codebook));
    const auto table = Contingency(ids, StackLabels(corpus),
                                   static_cast<int>(corpus.phones.size()), p.codebook.K());
    const CodePhoneHeatmap h = CodePhoneHeatmapFromTable(table);
    HeatmapSpec hs;
    hs.title = "P(phone | code), phones sorted by frequency";
    hs.x_label = "code";
    hs.y_label = "phone";
    hs.values = h.probabilities;
    for (int i : h.phone_order) hs.row_names.push_back(corpus.phones[i]);
    WriteTextFile(dir / "code_phone_heatmap.svg", RenderHeatmap(hs));
  }
  const auto add_probe = [](const json &probe, const std::string &name, LinePlotSpec *s) {
    PlotSeries ser{name, {}, {}};
    int idx = 0;
    for (int l = 0; probe.contains("layer" + std::to_string(l)); ++l, ++idx) {
      ser.x.push_back(idx);
      ser.y.push_back(probe["layer" + std::to_string(l)].get<double>());
    }
    ser.x.push_back(idx);
    ser.y.push_back(probe["z"].get<double>());
    s->series.push_back(std::move(ser));
  };
  if (metrics.contains("init") && metrics["init"].contains("probe")) {
    LinePlotSpec s;
    s.title = "Speaker probe accuracy per layer (last point: projection)";
    s.x_label = "layer";
    s.y_label = "accuracy";
    add_probe(metrics["init"]["probe"], "initial", &s);
    if (metrics.contains("trained") && metrics["trained"].contains("probe"))
      add_probe(metrics["trained"]["probe"], "trained", &s);
    WriteTextFile(dir / "probe_layers.svg", RenderLinePlot(s));
  }
}

// One (K, seed) run into `dir`; returns its metrics.
json SingleRun(const RunConfig &config, const CorpusManifest &corpus,
               const std::vector<FrameMatrix> &features, const TrainConfig &train,
               const fs::path &dir) {
  fs::create_directories(dir);
  json m = {{"K", train.K}, {"seed", train.seed}, {"total_steps", train.total_steps}};
  m["processed_speech_hours"] = ProcessedSpeechHours(train.total_steps, train.batch_seconds);
  m["baseline"] = Stage("baseline", [&] { return BaselineMetrics(corpus, features, train.K, config.eval); });

  const ModelParams init = Stage("init", [&] { return InitModelForCorpus(features, train); });
  if (config.eval.probe) {
    EvalConfig probe_only = config.eval;
    probe_only.units = false;
    probe_only.abx = false;
    m["init"] = Stage("eval-init", [&] { return ModelMetrics(corpus, features, init, probe_only); });
  }
  std::optional<TrainResult> trained;
  if (train.total_steps > 0) {
    trained = Stage("train", [&] {
      FeatureConfig fc;
      return Train(corpus, train, config.perturb, fc, init);
    });
    Stage("write-train", [&] {
      SaveCheckpoint(dir / "checkpoint.bin", trained->checkpoint);
      std::ostringstream log;
      trained->log.WriteCsv(log);
      WriteTextFile(dir / "train_log.csv", log.str());
      return 0;
    });
    m["trained"] = Stage("eval", [&] {
      return ModelMetrics(corpus, features, trained->checkpoint.params, config.eval);
    });
    m["trained"]["final_loss"] = trained->log.records.back().loss;
    if (m["trained"].contains("units") && m["baseline"].contains("kmeans"))
      m["pnmi_delta"] = m["trained"]["units"]["pnmi"].get<double>() -
                        m["baseline"]["kmeans"]["pnmi"].get<double>();
  }
  Stage("write-metrics", [&] {
    WriteTextFile(dir / "metrics.json", DumpJson(m));
    WritePlots(dir, corpus, features, trained ? &*trained : nullptr, m);
    return 0;
  });
  return m;
}

}  // namespace

fs::path RunExperiment(const RunConfig &config, const std::string &config_text) {
  config.Validate();
  const fs::path dir = config.output_dir;
  Stage("setup", [&] {
    fs::create_directories(dir);
    WriteTextFile(dir / "config.resolved.json", DumpJson(config.ToJson()));
    if (!config_text.empty()) WriteTextFile(dir / "config.toml", config_text);
    return 0;
  });
  const CorpusManifest corpus = Stage("corpus", [&] { return PrepareCorpus(config); });
  const std::vector<FrameMatrix> features =
      Stage("features", [&] { return CorpusFeatures(corpus); });

  if (config.sweep_K.empty() && config.sweep_seeds.empty()) {
    SingleRun(config, corpus, features, config.train, dir);
    return dir;
  }
  const std::vector<int> Ks = config.sweep_K.empty() ? std::vector<int>{config.train.K}
                                                     : config.sweep_K;
  const std::vector<uint64_t> seeds =
      config.sweep_seeds.empty() ? std::vector<uint64_t>{config.train.seed} : config.sweep_seeds;
  json top = {{"runs", json::array()}, {"by_K", json::array()}};
  LinePlotSpec plot;
  plot.title = "Unit quality vs codebook size";
  plot.x_label = "K";
  plot.y_label = "score";
  plot.log_x = true;
  PlotSeries pnmi_series{"PNMI", {}, {}}, purity_series{"phone purity", {}, {}};
  for (int K : Ks) {
    double pnmi_sum = 0.0, purity_sum = 0.0;
    int n = 0;
    for (uint64_t seed : seeds) {
      TrainConfig t = config.train;
      t.K = K;
      t.seed = seed;
      const std::string name = "K" + std::to_string(K) + "_seed" + std::to_string(seed);
      json m = SingleRun(config, corpus, features, t, dir / name);
      const json &units = m.contains("trained") && m["trained"].contains("units")
                              ? m["trained"]["units"]
                              : (m["baseline"].contains("kmeans") ? m["baseline"]["kmeans"]
                                                                  : json());
      if (!units.is_null()) {
        pnmi_sum += units["pnmi"].get<double>();
        purity_sum += units["phone_purity"].get<double>();
        ++n;
      }
      top["runs"].push_back({{"dir", name}, {"metrics", m}});
    }
    if (n > 0) {
      top["by_K"].push_back({{"K", K}, {"pnmi", pnmi_sum / n}, {"phone_purity", purity_sum / n}});
      pnmi_series.x.push_back(K);
      pnmi_series.y.push_back(pnmi_sum / n);
      purity_series.x.push_back(K);
      purity_series.y.push_back(purity_sum / n);
    }
  }
  plot.series = {pnmi_series, purity_series};
  Stage("write-metrics", [&] {
    WriteTextFile(dir / "metrics.json", DumpJson(top));
    WriteTextFile(dir / "pnmi_vs_k.svg", RenderLinePlot(plot));
    return 0;
  });
  return dir;
}

namespace {

double Get(const json &j, std::initializer_list<const char *> path) {
  const json *cur = &j;
  for (const char *k : path) {
    if (!cur->is_object() || !cur->contains(k)) return std::numeric_limits<double>::quiet_NaN();
    cur = &(*cur)[k];
  }
  return cur->is_number() ? cur->get<double>() : std::numeric_limits<double>::quiet_NaN();
}

ReportRow RowFromMetrics(const std::string &name, const json &m) {
  ReportRow r;
  r.run = name;
  r.K = m.value("K", 0);
  r.seed = m.value("seed", uint64_t{0});
  r.trained = m.contains("trained");
  r.processed_speech_hours = Get(m, {"processed_speech_hours"});
  r.baseline_pnmi = Get(m, {"baseline", "kmeans", "pnmi"});
  const char *src = r.trained ? "trained" : "baseline";
  const char *units = r.trained ? "units" : "kmeans";
  r.cluster_purity = Get(m, {src, units, "cluster_purity"});
  r.phone_purity = Get(m, {src, units, "phone_purity"});
  r.pnmi = Get(m, {src, units, "pnmi"});
  r.utilization = Get(m, {src, units, "utilization"});
  r.pnmi_delta = r.pnmi - r.baseline_pnmi;
  r.abx_within = Get(m, {src, "abx", "within"});
  r.abx_across = Get(m, {src, "abx", "across"});
  r.probe_accuracy = r.trained ? Get(m, {"trained", "probe", "z"}) : Get(m, {"init", "probe", "z"});
  return r;
}

std::string Fmt(double v, int digits = 4) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ReportRow> CollectReport(const std::vector<fs::path> &run_dirs) {
  if (run_dirs.empty()) throw ConfigError("report: no run directories given");
  std::vector<ReportRow> rows;
  for (const auto &dir : run_dirs) {
    const fs::path file = dir / "metrics.json";
    if (!fs::exists(file)) throw DataError("report: missing metrics file '" + file.string() + "'");
    json m;
    try {
      m = json::parse(ReadTextFile(file));
    } catch (const json::exception &e) {
      throw DataError("report: cannot parse '" + file.string() + "': " + e.what());
    }
    const std::string base = dir.filename().empty() ? dir.parent_path().filename().string()
                                                    : dir.filename().string();
    if (m.contains("runs")) {
      for (const auto &sub : m["runs"])
        rows.push_back(RowFromMetrics(base + "/" + sub["dir"].get<std::string>(), sub["metrics"]));
    } else {
      rows.push_back(RowFromMetrics(base, m));
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow &a, const ReportRow &b) { return a.K < b.K; });
  return rows;
}

namespace {

const char *kReportColumns[] = {"run",          "K",           "seed",           "trained",
                                "cluster_purity", "phone_purity", "pnmi",          "baseline_pnmi",
                                "pnmi_delta",   "utilization", "abx_within",     "abx_across",
                                "probe_accuracy", "processed_speech_hours"};

std::vector<std::string> RowCells(const ReportRow &r) {
  return {r.run,
          std::to_string(r.K),
          std::to_string(r.seed),
          r.trained ? "yes" : "no",
          Fmt(r.cluster_purity),
          Fmt(r.phone_purity),
          Fmt(r.pnmi),
          Fmt(r.baseline_pnmi),
          Fmt(r.pnmi_delta),
          Fmt(r.utilization),
          Fmt(r.abx_within),
          Fmt(r.abx_across),
          Fmt(r.probe_accuracy),
          Fmt(r.processed_speech_hours, 1)};
}

}  // namespace

std::string ReportCsv(const std::vector<ReportRow> &rows) {
  std::ostringstream os;
  for (size_t i = 0; i < std::size(kReportColumns); ++i)
    os << (i ? "," : "") << kReportColumns[i];
  os << '\n';
  for (const auto &r : rows) {
    const auto cells = RowCells(r);
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
  return os.str();
}

std::string ReportMarkdown(const std::vector<ReportRow> &rows) {
  std::ostringstream os;
  os << '|';
  for (const char *c : kReportColumns) os << ' ' << c << " |";
  os << "\n|";
  for (size_t i = 0; i < std::size(kReportColumns); ++i) os << "---|";
  os << '\n';
  for (const auto &r : rows) {
    os << '|';
    for (const auto &c : RowCells(r)) os << ' ' << c << " |";
    os << '\n';
  }
  return os.str();
}

}  // namespace spinlab
