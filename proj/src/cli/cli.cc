// Copyright 2026 The Hybrid DST Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "hdst/cli/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "hdst/common/errors.h"
#include "hdst/data/dstc_io.h"
#include "hdst/training/artifacts.h"
#include "hdst/training/ensemble.h"

namespace hdst::cli {
namespace fs = std::filesystem;
namespace {

// Raised when an evaluation misses --min-accuracy.
class ThresholdFailure : public Error {
 public:
  using Error::Error;
};

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

void RejectUnknownKeys(const nlohmann::json& doc, const std::set<std::string>& known,
                       const std::string& where) {
  if (!doc.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw LoadError("cannot create directory " + dir + ": " + ec.message());
}

std::string Require(const std::string& value, const std::string& what) {
  if (value.empty()) throw ConfigError("no " + what + " configured");
  return value;
}

Corpus LoadSplit(const RunConfig& config, const std::string& split) {
  return LoadCorpus(Require(config.data.List(split), split + " session list"),
                    Require(config.data.root, "data root"));
}

EnsembleWeighting ParseWeighting(const std::string& name) {
  if (name == "uniform") return EnsembleWeighting::kUniform;
  if (name == "fitted") return EnsembleWeighting::kFitted;
  throw ConfigError("unknown ensemble weighting '" + name + "'");
}

// Options shared by every subcommand. Values are applied over the config
// file only when given.
struct CommonFlags {
  std::string config_path;
  std::string out;
  std::string data;
  uint64_t seed = 0;
  size_t jobs = 1;
  size_t epochs = 0;
  CLI::Option* out_opt = nullptr;
  CLI::Option* data_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;

  void Register(CLI::App* app, bool with_epochs) {
    app->add_option("--config", config_path, "Run config (JSON)")->check(CLI::ExistingFile);
    out_opt = app->add_option("--out", out, "Output directory");
    data_opt = app->add_option("--data", data, "Directory written by gen-synthetic");
    seed_opt = app->add_option("--seed", seed, "Random seed");
    jobs_opt = app->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    if (with_epochs) epochs_opt = app->add_option("--epochs", epochs, "Training epochs");
  }

  RunConfig Resolve() const {
    RunConfig config = config_path.empty() ? RunConfig{} : RunConfig::Load(config_path);
    if (out_opt->count()) config.output_dir = out;
    if (data_opt->count()) config.data = DataPaths::SyntheticLayout(data);
    if (seed_opt->count()) {
      config.training.seed = seed;
      config.synthetic.corpus.seed = seed;
    }
    if (jobs_opt->count()) config.training.jobs = jobs;
    if (epochs_opt != nullptr && epochs_opt->count()) config.training.epochs = epochs;
    config.training.Validate();
    return config;
  }
};

void WriteVocabulary(const FeatureEncoder& encoder, const RunLayout& layout) {
  EnsureDir(layout.vocab_dir());
  encoder.turn_vocabulary().Save(layout.turn_vocab());
  encoder.value_vocabulary().Save(layout.value_vocab());
  nlohmann::ordered_json manifest;
  manifest["vocabulary_hash"] = encoder.VocabularyHash();
  manifest["slots"] = encoder.tracked_slots();
  manifest["ontology"] = encoder.ontology().ToJson();
  manifest["features"] = encoder.config().ToJson();
  WriteFileAtomically(layout.vocab_manifest(), manifest.dump(1) + "\n");
}

// The encoder of a run, checked against the run's feature settings.
FeatureEncoder RunEncoder(const RunConfig& config, const RunLayout& layout) {
  if (!fs::exists(layout.vocab_manifest())) {
    throw LoadError("no vocabulary in " + layout.vocab_dir() + "; run build-vocab first");
  }
  FeatureEncoder encoder = LoadEncoder(layout.vocab_dir());
  if (encoder.tracked_slots() != config.training.slots ||
      encoder.config().ToJson() != config.features.ToJson()) {
    throw VersionError("vocabulary in " + layout.vocab_dir() +
                       " was built with different slots or feature settings; rerun build-vocab");
  }
  return encoder;
}

void WriteJsonLines(std::ostream& out, const std::vector<nlohmann::ordered_json>& lines) {
  for (const auto& line : lines) out << line.dump() << '\n';
}

class MetricsLog {
 public:
  explicit MetricsLog(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw LoadError("cannot write " + path);
  }
  void Write(const EpochMetrics& m) { out_ << m.ToJson().dump() << '\n' << std::flush; }

 private:
  std::ofstream out_;
};

// Creates the INCOMPLETE marker for the lifetime of a training command.
class IncompleteMarker {
 public:
  explicit IncompleteMarker(const RunLayout& layout) : path_(layout.incomplete_marker()) {
    EnsureDir(layout.root);
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out << "training did not finish; outputs in this directory may be partial\n";
  }
  void Done() { fs::remove(path_); }

 private:
  std::string path_;
};

struct Corpora {
  Corpus train;
  Corpus dev;
  std::vector<EncodedDialog> train_encoded;
  std::vector<EncodedDialog> dev_encoded;
};

Corpora LoadTrainingCorpora(const RunConfig& config, const FeatureEncoder& encoder) {
  Corpora c;
  c.train = LoadSplit(config, "train");
  c.dev = LoadSplit(config, "dev");
  if (c.train.empty() || c.dev.empty()) throw LoadError("training and dev corpora must be non-empty");
  c.train_encoded = encoder.EncodeCorpus(c.train);
  c.dev_encoded = encoder.EncodeCorpus(c.dev);
  return c;
}

int CmdGenSynthetic(const RunConfig& config, const std::string& dir, std::ostream& out) {
  const SyntheticSettings& s = config.synthetic;
  s.corpus.Validate();
  const DataPaths paths = DataPaths::SyntheticLayout(dir);
  EnsureDir(paths.root);
  const std::vector<std::pair<std::string, size_t>> splits = {
      {"train", s.corpus.num_dialogs}, {"dev", s.dev_dialogs}, {"test", s.test_dialogs}};
  for (size_t i = 0; i < splits.size(); ++i) {
    SyntheticConfig split = s.corpus;
    split.num_dialogs = splits[i].second;
    split.seed = s.corpus.seed + i;
    split.session_prefix = s.corpus.session_prefix + "-" + splits[i].first;
    const SyntheticCorpus corpus = GenerateSyntheticCorpus(split);
    WriteCorpus(corpus.dialogs, paths.root, paths.List(splits[i].first));
    if (i == 0) corpus.ontology.Save(paths.ontology);
    out << splits[i].first << ": " << corpus.dialogs.size() << " dialogs\n";
  }
  nlohmann::ordered_json settings = s.corpus.ToJson();
  settings["dev_dialogs"] = s.dev_dialogs;
  settings["test_dialogs"] = s.test_dialogs;
  WriteFileAtomically((fs::path(dir) / "synthetic.json").string(), settings.dump(1) + "\n");
  out << "wrote " << dir << '\n';
  return kExitOk;
}

int CmdBuildVocab(const RunConfig& config, std::ostream& out) {
  const RunLayout layout{config.output_dir};
  const Ontology ontology = Ontology::Load(Require(config.data.ontology, "ontology"));
  const Corpus train = LoadSplit(config, "train");
  const FeatureEncoder encoder =
      FeatureEncoder::Build(train, ontology, config.training.slots, config.features);
  WriteVocabulary(encoder, layout);
  out << "turn vocabulary: " << encoder.turn_vocabulary().size() << " features\n"
      << "value vocabulary: " << encoder.value_vocabulary().size() << " features\n"
      << "vocabulary hash: " << encoder.VocabularyHash() << '\n';
  return kExitOk;
}

int CmdTrain(const RunConfig& config, std::ostream& out) {
  const RunLayout layout{config.output_dir};
  const FeatureEncoder encoder = RunEncoder(config, layout);
  const Corpora corpora = LoadTrainingCorpora(config, encoder);
  IncompleteMarker marker(layout);
  EnsureDir(layout.models_dir());
  EnsureDir(layout.logs_dir());
  MetricsLog log((fs::path(layout.logs_dir()) / "metrics.jsonl").string());
  const TrainingResult result =
      Train(encoder, corpora.train_encoded, corpora.dev_encoded, corpora.dev, config.training,
            [&](const EpochMetrics& m) {
              log.Write(m);
              out << "epoch " << m.epoch << " loss " << m.train_loss << " dev accuracy "
                  << m.dev_accuracy << '\n';
            });
  const std::string path = (fs::path(layout.models_dir()) / "model.json").string();
  SaveModelArtifact(path, MakeModelArtifact(result.model, encoder, config.ToJson()));
  marker.Done();
  out << "best epoch " << result.best_epoch << " dev accuracy "
      << result.metrics[result.best_epoch].dev_accuracy << "\nwrote " << path << '\n';
  return kExitOk;
}

int CmdTrainEnsemble(const RunConfig& config, std::ostream& out) {
  const RunLayout layout{config.output_dir};
  const FeatureEncoder encoder = RunEncoder(config, layout);
  const Corpora corpora = LoadTrainingCorpora(config, encoder);
  const EnsembleWeighting weighting = ParseWeighting(config.ensemble.weighting);
  IncompleteMarker marker(layout);
  EnsureDir(layout.models_dir());
  EnsureDir(layout.logs_dir());
  const EnsembleResult result =
      TrainEnsemble(encoder, corpora.train_encoded, corpora.dev_encoded, corpora.dev,
                    config.training, config.ensemble.members, config.ensemble.keep, weighting,
                    config.training.jobs);
  for (const auto& member : result.all) {
    MetricsLog log((fs::path(layout.logs_dir()) /
                    ("member-" + std::to_string(member.seed) + ".jsonl"))
                       .string());
    for (const auto& m : member.metrics) log.Write(m);
  }
  EnsembleManifest manifest;
  manifest.vocabulary_hash = encoder.VocabularyHash();
  manifest.weighting = config.ensemble.weighting;
  manifest.config = config.ToJson();
  manifest.candidates = result.all;
  for (size_t r = 0; r < result.models.size(); ++r) {
    const EnsembleMember& m = result.kept[r];
    RunConfig member_config = config;
    member_config.training.seed = m.seed;
    const std::string file = "member-" + std::to_string(m.seed) + ".json";
    SaveModelArtifact((fs::path(layout.models_dir()) / file).string(),
                      MakeModelArtifact(result.models[r], encoder, member_config.ToJson()));
    manifest.members.push_back(
        {file, result.weights[r], m.seed, m.dev_accuracy, m.dev_l2, m.best_epoch});
    out << "member seed " << m.seed << " weight " << result.weights[r] << " dev accuracy "
        << m.dev_accuracy << '\n';
  }
  const std::string path = (fs::path(layout.models_dir()) / "ensemble.json").string();
  SaveEnsembleManifest(path, manifest);
  marker.Done();
  out << "wrote " << path << '\n';
  return kExitOk;
}

struct LoadedPredictor {
  Predictor predictor;
  FeatureEncoder encoder;
};

// The vocabulary of a model defaults to <model dir>/../vocab.
LoadedPredictor LoadForInference(const std::string& model_path, const std::string& vocab_dir) {
  Predictor predictor = LoadPredictor(model_path);
  const std::string dir =
      vocab_dir.empty()
          ? (fs::path(model_path).parent_path().parent_path() / "vocab").string()
          : vocab_dir;
  FeatureEncoder encoder = LoadEncoder(dir);
  for (const auto& member : predictor.members) CheckEncoderCompatible(member, encoder);
  return {std::move(predictor), std::move(encoder)};
}

std::string DefaultModel(const RunConfig& config) {
  return (fs::path(RunLayout{config.output_dir}.models_dir()) / "model.json").string();
}

int CmdEvaluate(const RunConfig& config, const std::string& model_arg,
                const std::string& vocab_dir, const std::string& split,
                std::optional<double> min_accuracy, std::ostream& out) {
  const std::string model_path = model_arg.empty() ? DefaultModel(config) : model_arg;
  const LoadedPredictor loaded = LoadForInference(model_path, vocab_dir);
  const Corpus corpus = LoadSplit(config, split);
  const auto encoded = loaded.encoder.EncodeCorpus(corpus);
  const auto beliefs = loaded.predictor.Predict(encoded, config.training.jobs);
  EvaluationReport report = Evaluate(beliefs, corpus, config.schedule);
  nlohmann::ordered_json echo;
  echo["model"] = fs::path(model_path).filename().string();
  echo["members"] = loaded.predictor.members.size();
  echo["split"] = split;
  echo["run"] = loaded.predictor.primary().config;
  report.config = echo;

  std::string text = report.ToText();
  nlohmann::ordered_json json = report.ToJson();
  const Schedule other = config.schedule == Schedule::kAllTurns ? Schedule::kLabelledTurns
                                                                : Schedule::kAllTurns;
  size_t skipped = 0;
  const auto other_turns = CollectPredictions(beliefs, corpus, other, &skipped);
  if (!other_turns.empty()) {
    nlohmann::ordered_json alt;
    alt["schedule"] = ScheduleName(other);
    alt["joint_accuracy"] = JointAccuracy(other_turns);
    alt["joint_l2"] = JointL2(other_turns);
    alt["evaluated_turns"] = other_turns.size();
    alt["skipped_turns"] = skipped;
    char line[160];
    std::snprintf(line, sizeof(line), "%s: joint accuracy %.4f  joint l2 %.4f  (%zu turns)\n",
                  ScheduleName(other).c_str(), alt["joint_accuracy"].get<double>(),
                  alt["joint_l2"].get<double>(), other_turns.size());
    text += line;
    json["other_schedule"] = std::move(alt);
  }

  const RunLayout layout{config.output_dir};
  EnsureDir(layout.reports_dir());
  const std::string stem =
      "evaluate-" + split + "-" + fs::path(model_path).stem().string();
  const fs::path reports(layout.reports_dir());
  WriteFileAtomically((reports / (stem + ".txt")).string(), text);
  WriteFileAtomically((reports / (stem + ".json")).string(), json.dump(1) + "\n");
  out << text;
  if (min_accuracy && report.joint_accuracy < *min_accuracy) {
    std::ostringstream msg;
    msg << "joint accuracy " << report.joint_accuracy << " is below --min-accuracy "
        << *min_accuracy;
    throw ThresholdFailure(msg.str());
  }
  return kExitOk;
}

int CmdTrack(const RunConfig& config, const std::string& model_arg, const std::string& vocab_dir,
             const std::string& dialog_path, std::ostream& out) {
  const std::string model_path = model_arg.empty() ? DefaultModel(config) : model_arg;
  const LoadedPredictor loaded = LoadForInference(model_path, vocab_dir);
  const std::string log_path =
      fs::is_directory(dialog_path) ? (fs::path(dialog_path) / "log.json").string() : dialog_path;
  const Dialog dialog = LoadDialogLog(log_path);
  const EncodedDialog encoded = loaded.encoder.Encode(dialog, nullptr);
  const auto beliefs = loaded.predictor.Predict(std::span<const EncodedDialog>(&encoded, 1));
  WriteJsonLines(out, beliefs.front().ToJsonLines());
  return kExitOk;
}

int Dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid dialog state tracker", "hdst"};
  app.require_subcommand(1);

  CommonFlags gen_flags, vocab_flags, train_flags, ensemble_flags, eval_flags, track_flags;
  size_t dialogs = 0, dev_dialogs = 0, test_dialogs = 0;
  double confusion = 0.0;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic corpus in the DSTC2 layout");
  gen_flags.Register(gen, false);
  gen_flags.out_opt->required()->description("Corpus directory");
  auto* dialogs_opt = gen->add_option("--dialogs", dialogs, "Training dialogs");
  auto* dev_opt = gen->add_option("--dev-dialogs", dev_dialogs, "Dev dialogs");
  auto* test_opt = gen->add_option("--test-dialogs", test_dialogs, "Test dialogs");
  auto* confusion_opt = gen->add_option("--confusion", confusion, "ASR confusion rate")
                            ->check(CLI::Range(0.0, 1.0));

  size_t turn_capacity = 0, value_capacity = 0;
  auto* vocab = app.add_subcommand("build-vocab", "Build the turn and value vocabularies");
  vocab_flags.Register(vocab, false);
  auto* turn_cap_opt = vocab->add_option("--turn-capacity", turn_capacity)
                           ->check(CLI::PositiveNumber);
  auto* value_cap_opt = vocab->add_option("--value-capacity", value_capacity)
                            ->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train one tracker");
  train_flags.Register(train, true);

  size_t members = 0, keep = 0;
  std::string weighting;
  auto* ensemble = app.add_subcommand("train-ensemble", "Train an ensemble of trackers");
  ensemble_flags.Register(ensemble, true);
  auto* members_opt = ensemble->add_option("--members", members)->check(CLI::PositiveNumber);
  auto* keep_opt = ensemble->add_option("--keep", keep)->check(CLI::PositiveNumber);
  auto* weighting_opt = ensemble->add_option("--weighting", weighting)
                            ->check(CLI::IsMember({"uniform", "fitted"}));

  std::string model, vocab_dir, split = "test", schedule;
  double min_accuracy = 0.0;
  auto* evaluate = app.add_subcommand("evaluate", "Score a model or ensemble on a corpus split");
  eval_flags.Register(evaluate, false);
  evaluate->add_option("--model", model, "Model or ensemble manifest");
  evaluate->add_option("--vocab", vocab_dir, "Vocabulary directory");
  evaluate->add_option("--split", split, "train, dev or test")
      ->check(CLI::IsMember({"train", "dev", "test"}));
  auto* schedule_opt = evaluate->add_option("--schedule", schedule)
                           ->check(CLI::IsMember({"all_turns", "labelled_turns"}));
  auto* min_acc_opt = evaluate->add_option("--min-accuracy", min_accuracy,
                                           "Exit with status 3 below this joint accuracy");

  std::string track_model, track_vocab, dialog_path;
  auto* track = app.add_subcommand("track", "Print per-turn beliefs of one dialog");
  track_flags.Register(track, false);
  track->add_option("--model", track_model, "Model or ensemble manifest");
  track->add_option("--vocab", track_vocab, "Vocabulary directory");
  track->add_option("--dialog", dialog_path, "log.json or its session directory")
      ->required()
      ->check(CLI::ExistingPath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (gen->parsed()) {
    RunConfig config = gen_flags.Resolve();
    if (dialogs_opt->count()) config.synthetic.corpus.num_dialogs = dialogs;
    if (dev_opt->count()) config.synthetic.dev_dialogs = dev_dialogs;
    if (test_opt->count()) config.synthetic.test_dialogs = test_dialogs;
    if (confusion_opt->count()) config.synthetic.corpus.asr_confusion_rate = confusion;
    return CmdGenSynthetic(config, gen_flags.out, out);
  }
  if (vocab->parsed()) {
    RunConfig config = vocab_flags.Resolve();
    if (turn_cap_opt->count()) config.features.turn_capacity = turn_capacity;
    if (value_cap_opt->count()) config.features.value_capacity = value_capacity;
    return CmdBuildVocab(config, out);
  }
  if (train->parsed()) return CmdTrain(train_flags.Resolve(), out);
  if (ensemble->parsed()) {
    RunConfig config = ensemble_flags.Resolve();
    if (members_opt->count()) config.ensemble.members = members;
    if (keep_opt->count()) config.ensemble.keep = keep;
    if (weighting_opt->count()) config.ensemble.weighting = weighting;
    return CmdTrainEnsemble(config, out);
  }
  if (evaluate->parsed()) {
    RunConfig config = eval_flags.Resolve();
    if (schedule_opt->count()) config.schedule = ParseSchedule(schedule);
    return CmdEvaluate(config, model, vocab_dir, split,
                       min_acc_opt->count() ? std::optional<double>(min_accuracy) : std::nullopt,
                       out);
  }
  return CmdTrack(track_flags.Resolve(), track_model, track_vocab, dialog_path, out);
}

}  // namespace

DataPaths DataPaths::SyntheticLayout(const std::string& dir) {
  const fs::path d(dir);
  return {(d / "data").string(), (d / "train.flist").string(), (d / "dev.flist").string(),
          (d / "test.flist").string(), (d / "ontology.json").string()};
}

const std::string& DataPaths::List(const std::string& split) const {
  if (split == "train") return train;
  if (split == "dev") return dev;
  if (split == "test") return test;
  throw ConfigError("unknown split '" + split + "'");
}

RunConfig RunConfig::FromJson(const nlohmann::json& doc, const std::string& base_dir) {
  RejectUnknownKeys(doc, {"data", "output_dir", "features", "training", "ensemble", "schedule",
                          "synthetic"},
                    "run config");
  RunConfig c;
  try {
    if (doc.contains("data")) {
      const auto& d = doc.at("data");
      RejectUnknownKeys(d, {"root", "train", "dev", "test", "ontology"}, "data");
      c.data.root = Resolve(base_dir, d.value("root", ""));
      c.data.train = Resolve(base_dir, d.value("train", ""));
      c.data.dev = Resolve(base_dir, d.value("dev", ""));
      c.data.test = Resolve(base_dir, d.value("test", ""));
      c.data.ontology = Resolve(base_dir, d.value("ontology", ""));
    }
    c.output_dir = Resolve(base_dir, doc.value("output_dir", c.output_dir));
    if (doc.contains("features")) c.features = FeatureConfig::FromJson(doc.at("features"));
    if (doc.contains("training")) c.training = TrainingConfig::FromJson(doc.at("training"));
    if (doc.contains("ensemble")) {
      const auto& e = doc.at("ensemble");
      RejectUnknownKeys(e, {"members", "keep", "weighting"}, "ensemble");
      c.ensemble.members = e.value("members", c.ensemble.members);
      c.ensemble.keep = e.value("keep", c.ensemble.keep);
      c.ensemble.weighting = e.value("weighting", c.ensemble.weighting);
      ParseWeighting(c.ensemble.weighting);
    }
    if (doc.contains("schedule")) c.schedule = ParseSchedule(doc.at("schedule").get<std::string>());
    if (doc.contains("synthetic")) {
      nlohmann::json s = doc.at("synthetic");
      c.synthetic.dev_dialogs = s.value("dev_dialogs", c.synthetic.dev_dialogs);
      c.synthetic.test_dialogs = s.value("test_dialogs", c.synthetic.test_dialogs);
      s.erase("dev_dialogs");
      s.erase("test_dialogs");
      c.synthetic.corpus = SyntheticConfig::FromJson(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::Load(const std::string& path) {
  try {
    return FromJson(ReadJsonFile(path), fs::path(path).parent_path().string());
  } catch (const LoadError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::ordered_json RunConfig::ToJson() const {
  nlohmann::ordered_json doc;
  doc["data"] = {{"root", data.root},
                 {"train", data.train},
                 {"dev", data.dev},
                 {"test", data.test},
                 {"ontology", data.ontology}};
  doc["features"] = features.ToJson();
  doc["training"] = training.ToJson();
  doc["ensemble"] = {{"members", ensemble.members},
                     {"keep", ensemble.keep},
                     {"weighting", ensemble.weighting}};
  doc["schedule"] = ScheduleName(schedule);
  return doc;
}

std::string RunLayout::vocab_dir() const { return (fs::path(root) / "vocab").string(); }
std::string RunLayout::models_dir() const { return (fs::path(root) / "models").string(); }
std::string RunLayout::logs_dir() const { return (fs::path(root) / "logs").string(); }
std::string RunLayout::reports_dir() const { return (fs::path(root) / "reports").string(); }
std::string RunLayout::turn_vocab() const { return (fs::path(vocab_dir()) / "turn.vocab").string(); }
std::string RunLayout::value_vocab() const {
  return (fs::path(vocab_dir()) / "value.vocab").string();
}
std::string RunLayout::vocab_manifest() const {
  return (fs::path(vocab_dir()) / "vocab.json").string();
}
std::string RunLayout::incomplete_marker() const { return (fs::path(root) / "INCOMPLETE").string(); }

FeatureEncoder LoadEncoder(const std::string& vocab_dir) {
  const fs::path dir(vocab_dir);
  const nlohmann::json manifest = ReadJsonFile((dir / "vocab.json").string());
  try {
    FeatureEncoder encoder(Ontology::FromJson(manifest.at("ontology")),
                           manifest.at("slots").get<std::vector<std::string>>(),
                           FeatureConfig::FromJson(manifest.at("features")),
                           FeatureVocabulary::Load((dir / "turn.vocab").string(), VocabularyKind::kTurn),
                           FeatureVocabulary::Load((dir / "value.vocab").string(),
                                                   VocabularyKind::kValue));
    if (encoder.VocabularyHash() != manifest.at("vocabulary_hash").get<std::string>()) {
      throw VersionError("vocabulary files in " + vocab_dir + " do not match their manifest hash");
    }
    return encoder;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(vocab_dir + ": malformed vocabulary manifest: " + e.what());
  }
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return Dispatch(argc, argv, out, err);
  } catch (const ThresholdFailure& e) {
    err << "threshold failure: " << e.what() << '\n';
    return kExitThreshold;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"hdst"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hdst::cli
