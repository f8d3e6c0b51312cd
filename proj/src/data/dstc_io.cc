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

#include "hdst/data/dstc_io.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "hdst/common/errors.h"

namespace hdst {
namespace fs = std::filesystem;
namespace {

nlohmann::json ReadJsonFile(const fs::path& path, const std::string& session) {
  std::ifstream in(path);
  if (!in) throw LoadError("session " + session + ": cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("session " + session + ": malformed " + path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const fs::path& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

double CheckedProbability(double p, const std::string& what) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0 + 1e-9) {
    throw LoadError(what + ": probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::min(p, 1.0);
}

template <typename T>
void SortByProbability(std::vector<T>& items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const T& a, const T& b) { return a.probability > b.probability; });
}

std::vector<AsrHypothesis> ParseAsrHyps(const nlohmann::json& hyps, const std::string& what) {
  std::vector<AsrHypothesis> out;
  for (const auto& h : hyps) {
    out.push_back({h.at("asr-hyp").get<std::string>(),
                   CheckedProbability(std::exp(h.at("score").get<double>()), what)});
  }
  SortByProbability(out);
  return out;
}

double LogScore(double p) { return std::log(std::max(p, 1e-300)); }

nlohmann::ordered_json AsrHypsToJson(const std::vector<AsrHypothesis>& hyps) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& h : hyps) {
    out.push_back({{"asr-hyp", h.text}, {"score", LogScore(h.probability)}});
  }
  return out;
}

std::string ScalarToString(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return v.dump();
}

}  // namespace

std::string ToString(const DialogAct& act) {
  std::string out = act.act + "(";
  if (!act.slot.empty()) {
    out += act.slot;
    if (!act.value.empty()) out += "=" + act.value;
  }
  return out + ")";
}

std::vector<std::string> ReadSessionList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open session list " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::vector<DialogAct> ParseDialogActs(const nlohmann::json& acts) {
  std::vector<DialogAct> out;
  if (acts.is_null()) return out;
  for (const auto& a : acts) {
    const std::string name = a.at("act").get<std::string>();
    const auto& slots = a.contains("slots") ? a.at("slots") : nlohmann::json::array();
    if (slots.empty()) {
      out.push_back({name, "", ""});
      continue;
    }
    for (const auto& pair : slots) {
      if (!pair.is_array() || pair.size() != 2) throw LoadError("act slots must be pairs");
      const std::string first = ScalarToString(pair[0]);
      const std::string second = ScalarToString(pair[1]);
      if (first == "slot") {
        out.push_back({name, second, ""});
      } else {
        out.push_back({name, first, second});
      }
    }
  }
  return out;
}

nlohmann::ordered_json DialogActsToJson(const std::vector<DialogAct>& acts) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& a : acts) {
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    if (!a.slot.empty()) {
      if (a.value.empty()) {
        slots.push_back({"slot", a.slot});
      } else {
        slots.push_back({a.slot, a.value});
      }
    }
    out.push_back({{"act", a.act}, {"slots", slots}});
  }
  return out;
}

Dialog ParseDialogLog(const nlohmann::json& log, const std::string& name) {
  Dialog dialog;
  dialog.session_id = log.value("session-id", name);
  if (!log.is_object() || !log.contains("turns") || !log.at("turns").is_array()) {
    throw LoadError("session " + name + ": malformed log: no turn list");
  }
  for (const auto& t : log.at("turns")) {
    const std::string what = "session " + name + " turn " + std::to_string(dialog.turns.size());
    try {
      DialogTurn turn;
      turn.machine_acts = ParseDialogActs(t.at("output").at("dialog-acts"));
      const auto& input = t.at("input");
      const auto& live = input.at("live");
      if (live.contains("asr-hyps")) turn.live_asr = ParseAsrHyps(live.at("asr-hyps"), what);
      if (live.contains("slu-hyps")) {
        for (const auto& h : live.at("slu-hyps")) {
          turn.live_slu.push_back({ParseDialogActs(h.at("slu-hyp")),
                                   CheckedProbability(h.at("score").get<double>(), what)});
        }
        SortByProbability(turn.live_slu);
      }
      if (input.contains("batch") && !input.at("batch").is_null()) {
        const auto& batch = input.at("batch");
        BatchAsr b;
        if (batch.contains("asr-hyps")) b.nbest = ParseAsrHyps(batch.at("asr-hyps"), what);
        if (batch.contains("cnet")) {
          std::map<std::string, double> unigrams;
          for (const auto& slot : batch.at("cnet")) {
            for (const auto& arc : slot.at("arcs")) {
              const std::string word = arc.at("word").get<std::string>();
              if (word == "!null") continue;
              unigrams[word] += std::exp(arc.at("score").get<double>());
            }
          }
          for (const auto& [word, weight] : unigrams) b.confusions.push_back({word, weight});
        }
        turn.batch_asr = std::move(b);
      }
      dialog.turns.push_back(std::move(turn));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(what + ": malformed log: " + e.what());
    }
  }
  return dialog;
}

DialogLabels ParseDialogLabels(const nlohmann::json& label, const std::string& name) {
  DialogLabels labels;
  labels.session_id = label.value("session-id", name);
  try {
    for (const auto& t : label.at("turns")) {
      TurnLabel turn;
      if (t.contains("goal-labels")) {
        for (const auto& [slot, value] : t.at("goal-labels").items()) {
          turn.goals[slot] = value.get<std::string>();
        }
      }
      if (t.contains("semantics")) turn.semantics = ParseDialogActs(t.at("semantics").at("json"));
      turn.transcription = t.value("transcription", "");
      labels.turns.push_back(std::move(turn));
    }
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("session " + name + ": malformed label: " + e.what());
  }
  return labels;
}

nlohmann::ordered_json DialogLogToJson(const Dialog& dialog) {
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (size_t i = 0; i < dialog.turns.size(); ++i) {
    const DialogTurn& t = dialog.turns[i];
    nlohmann::ordered_json slu = nlohmann::ordered_json::array();
    for (const auto& h : t.live_slu) {
      slu.push_back({{"slu-hyp", DialogActsToJson(h.acts)}, {"score", h.probability}});
    }
    nlohmann::ordered_json input;
    input["live"] = {{"asr-hyps", AsrHypsToJson(t.live_asr)}, {"slu-hyps", slu}};
    if (t.batch_asr) {
      nlohmann::ordered_json cnet = nlohmann::ordered_json::array();
      for (const auto& c : t.batch_asr->confusions) {
        cnet.push_back({{"arcs", {{{"word", c.word}, {"score", LogScore(c.weight)}}}}});
      }
      input["batch"] = {{"asr-hyps", AsrHypsToJson(t.batch_asr->nbest)}, {"cnet", cnet}};
    }
    turns.push_back({{"turn-index", i},
                     {"output", {{"dialog-acts", DialogActsToJson(t.machine_acts)}}},
                     {"input", input}});
  }
  return {{"session-id", dialog.session_id}, {"turns", turns}};
}

nlohmann::ordered_json DialogLabelsToJson(const DialogLabels& labels) {
  nlohmann::ordered_json turns = nlohmann::ordered_json::array();
  for (size_t i = 0; i < labels.turns.size(); ++i) {
    const TurnLabel& t = labels.turns[i];
    nlohmann::ordered_json goals = nlohmann::ordered_json::object();
    for (const auto& [slot, value] : t.goals) goals[slot] = value;
    turns.push_back({{"turn-index", i},
                     {"goal-labels", goals},
                     {"semantics", {{"json", DialogActsToJson(t.semantics)}}},
                     {"transcription", t.transcription}});
  }
  return {{"session-id", labels.session_id}, {"turns", turns}};
}

LabeledDialog LoadSession(const std::string& data_root, const std::string& session) {
  const fs::path dir = fs::path(data_root) / session;
  LabeledDialog out;
  out.dialog = ParseDialogLog(ReadJsonFile(dir / "log.json", session), session);
  out.labels = ParseDialogLabels(ReadJsonFile(dir / "label.json", session), session);
  if (out.dialog.turns.size() != out.labels.turns.size()) {
    throw AlignmentError("session " + session + ": log has " +
                         std::to_string(out.dialog.turns.size()) + " turns but label has " +
                         std::to_string(out.labels.turns.size()));
  }
  return out;
}

Corpus LoadCorpus(const std::string& session_list, const std::string& data_root) {
  Corpus corpus;
  for (const auto& session : ReadSessionList(session_list)) {
    corpus.push_back(LoadSession(data_root, session));
  }
  return corpus;
}

Dialog LoadDialogLog(const std::string& log_path) {
  return ParseDialogLog(ReadJsonFile(log_path, log_path), log_path);
}

void WriteCorpus(const Corpus& corpus, const std::string& data_root,
                 const std::string& session_list) {
  std::string list;
  for (const auto& d : corpus) {
    const fs::path dir = fs::path(data_root) / d.dialog.session_id;
    fs::create_directories(dir);
    WriteJsonFile(dir / "log.json", DialogLogToJson(d.dialog));
    WriteJsonFile(dir / "label.json", DialogLabelsToJson(d.labels));
    list += d.dialog.session_id + "\n";
  }
  const fs::path list_path(session_list);
  if (list_path.has_parent_path()) fs::create_directories(list_path.parent_path());
  std::ofstream out(session_list);
  if (!out) throw LoadError("cannot write session list " + session_list);
  out << list;
}

}  // namespace hdst
