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

#include "hdst/data/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "hdst/common/errors.h"
#include "hdst/common/random.h"
#include "hdst/data/preprocess.h"

namespace hdst {
namespace {

const std::map<std::string, std::vector<std::string>>& ValuePools() {
  static const auto* pools = new std::map<std::string, std::vector<std::string>>{
      {"food",
       {"italian", "indian", "chinese", "french", "thai", "korean", "spanish", "british",
        "turkish", "japanese", "vietnamese", "greek", "lebanese", "mexican", "asian oriental",
        "european"}},
      {"pricerange",
       {"cheap", "moderate", "expensive", "affordable", "upscale", "budget", "luxury",
        "midrange"}},
      {"area", {"north", "south", "east", "west", "centre", "riverside", "harbour", "uptown"}},
      {"name", {"golden curry", "pizza palace", "royal spice"}},
  };
  return *pools;
}

const std::map<std::string, std::vector<std::string>>& Templates() {
  static const auto* templates = new std::map<std::string, std::vector<std::string>>{
      {"food", {"i want {v} food", "{v} food", "looking for {v} food", "serving {v} food"}},
      {"pricerange",
       {"a {v} restaurant", "{v} price range", "something {v}", "in the {v} price range"}},
      {"area", {"in the {v}", "{v} part of town", "the {v} area", "somewhere in the {v}"}},
  };
  return *templates;
}

std::vector<std::string> Tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// A piece of an utterance. Value segments may be confused by the ASR.
struct Segment {
  std::string text;
  std::string slot;
  std::string value;
  bool confusable = false;
};

using Utterance = std::vector<Segment>;

struct UserTurn {
  Utterance utterance;
  std::vector<DialogAct> semantics;
};

std::string Render(const Utterance& u) {
  std::vector<std::string> parts;
  for (const auto& s : u) parts.push_back(s.text);
  return Join(parts);
}

void AppendText(Utterance& u, const std::string& text) { u.push_back({text, "", "", false}); }

class Generator {
 public:
  explicit Generator(const SyntheticConfig& config)
      : config_(config), ontology_(SyntheticOntology(config)), rng_(config.seed) {
    for (const auto& slot : config_.slots) {
      for (const auto& v : ontology_.values(slot)) {
        const auto& excluded = Excluded(slot);
        if (std::find(excluded.begin(), excluded.end(), v) == excluded.end()) {
          allowed_[slot].push_back(v);
        }
      }
      if (allowed_[slot].empty()) throw ConfigError("all values of slot " + slot + " excluded");
    }
    // Longest renderings first so multi-word values win over their parts.
    for (const auto& slot : config_.slots) {
      for (const auto& v : ontology_.values(slot)) lexicon_.push_back({slot, v, Tokens(v)});
    }
    std::stable_sort(lexicon_.begin(), lexicon_.end(), [](const auto& a, const auto& b) {
      return a.tokens.size() > b.tokens.size();
    });
  }

  SyntheticCorpus Run() {
    SyntheticCorpus out{ontology_, {}};
    for (size_t i = 0; i < config_.num_dialogs; ++i) out.dialogs.push_back(MakeDialog(i));
    return out;
  }

 private:
  struct LexiconEntry {
    std::string slot;
    std::string value;
    std::vector<std::string> tokens;
  };

  const std::vector<std::string>& Excluded(const std::string& slot) const {
    static const std::vector<std::string> kEmpty;
    auto it = config_.excluded_values.find(slot);
    return it == config_.excluded_values.end() ? kEmpty : it->second;
  }

  std::string SampleGoal(const std::string& slot) {
    if (rng_.Bernoulli(config_.dontcare_rate)) return kDontCare;
    const auto& pool = allowed_[slot];
    return pool[rng_.Index(pool.size())];
  }

  std::string SampleOther(const std::string& slot, const std::string& current) {
    std::vector<std::string> options;
    for (const auto& v : allowed_[slot]) {
      if (v != current) options.push_back(v);
    }
    if (options.empty()) return current;
    return options[rng_.Index(options.size())];
  }

  const AliasEntry* FindAlias(const std::string& slot, const std::string& value) const {
    for (const auto& a : config_.alias_table) {
      if (a.slot == slot && a.value == value) return &a;
    }
    return nullptr;
  }

  // Utterance fragment informing slot=value.
  Utterance InformPhrase(const std::string& slot, const std::string& value, bool requested) {
    Utterance u;
    if (value == kDontCare) {
      if (requested && rng_.Bernoulli(0.5)) {
        AppendText(u, "i dont care");
      } else {
        AppendText(u, "any " + SyntheticSlotPhrase(slot));
      }
      return u;
    }
    Segment value_segment{value, slot, value, true};
    if (const AliasEntry* alias = FindAlias(slot, value);
        alias != nullptr && rng_.Bernoulli(config_.alias_rate)) {
      value_segment = {alias->phrase, slot, value, false};
    }
    std::vector<std::string> options;
    auto it = Templates().find(slot);
    if (it != Templates().end()) {
      options = it->second;
    } else {
      options = {"{v} " + SyntheticSlotPhrase(slot), "the " + SyntheticSlotPhrase(slot) + " {v}"};
    }
    const std::string& tmpl = options[rng_.Index(options.size())];
    const size_t pos = tmpl.find("{v}");
    AppendText(u, tmpl.substr(0, pos));
    u.push_back(value_segment);
    AppendText(u, tmpl.substr(pos + 3));
    return u;
  }

  void AddInform(UserTurn& turn, const std::string& slot, const std::string& value,
                 bool requested) {
    if (!turn.semantics.empty() && !turn.utterance.empty()) AppendText(turn.utterance, "and");
    const Utterance phrase = InformPhrase(slot, value, requested);
    turn.utterance.insert(turn.utterance.end(), phrase.begin(), phrase.end());
    turn.semantics.push_back({"inform", slot, value});
  }

  Utterance Corrupt(const Utterance& u, double swap_rate, bool drop_words) {
    Utterance out;
    for (const auto& s : u) {
      Segment copy = s;
      if (s.confusable && rng_.Bernoulli(swap_rate)) copy.text = SampleOther(s.slot, s.value);
      out.push_back(copy);
    }
    if (drop_words && rng_.Bernoulli(0.3)) {
      std::vector<std::pair<size_t, size_t>> words;  // (segment, word index)
      for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].confusable || !out[i].slot.empty()) continue;
        const auto tokens = Tokens(out[i].text);
        for (size_t w = 0; w < tokens.size(); ++w) words.emplace_back(i, w);
      }
      if (!words.empty()) {
        const auto [seg, w] = words[rng_.Index(words.size())];
        auto tokens = Tokens(out[seg].text);
        tokens.erase(tokens.begin() + w);
        out[seg].text = Join(tokens);
      }
    }
    return out;
  }

  std::vector<AsrHypothesis> MakeNbest(const Utterance& u, double top_rate) {
    static const double kAlpha[] = {4.0, 1.5, 1.0};
    auto weights = rng_.Dirichlet(kAlpha);
    std::sort(weights.begin(), weights.end(), std::greater<>());
    std::map<std::string, double> merged;
    std::vector<std::string> order;
    for (size_t k = 0; k < 3; ++k) {
      const double rate = k == 0 ? top_rate : std::max(top_rate, 0.5);
      const std::string text = Render(Corrupt(u, rate, k > 0));
      if (!merged.count(text)) order.push_back(text);
      merged[text] += weights[k];
    }
    std::vector<AsrHypothesis> out;
    for (const auto& text : order) out.push_back({text, std::min(merged[text], 1.0)});
    // Merged lower hypotheses must not outrank the top one.
    auto best = std::max_element(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.probability < b.probability;
    });
    std::swap(out.front().probability, best->probability);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    return out;
  }

  // Rule-based parse of one hypothesis; recognizes only verbatim values.
  std::vector<DialogAct> Parse(const std::string& text, const std::vector<DialogAct>& machine) {
    const auto tokens = Tokens(text);
    std::vector<DialogAct> acts;
    auto add = [&acts](DialogAct a) {
      if (std::find(acts.begin(), acts.end(), a) == acts.end()) acts.push_back(std::move(a));
    };
    std::string requested;
    for (const auto& m : machine) {
      if (m.act == "request") requested = m.slot;
    }
    for (size_t i = 0; i < tokens.size();) {
      bool matched = false;
      for (const auto& entry : lexicon_) {
        const size_t n = entry.tokens.size();
        if (i + n <= tokens.size() &&
            std::equal(entry.tokens.begin(), entry.tokens.end(), tokens.begin() + i)) {
          add({"inform", entry.slot, entry.value});
          i += n;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      const std::string& w = tokens[i];
      if (w == "yes") add({"affirm", "", ""});
      if (w == "no") add({"negate", "", ""});
      if (w == "goodbye" || w == "bye") add({"bye", "", ""});
      if (w == "hello") add({"hello", "", ""});
      if (w == "dont" && i + 1 < tokens.size() && tokens[i + 1] == "care" && !requested.empty()) {
        add({"inform", requested, kDontCare});
      }
      if (w == "any") {
        for (const auto& slot : config_.slots) {
          const auto phrase = Tokens(SyntheticSlotPhrase(slot));
          if (i + 1 + phrase.size() <= tokens.size() &&
              std::equal(phrase.begin(), phrase.end(), tokens.begin() + i + 1)) {
            add({"inform", slot, kDontCare});
          }
        }
      }
      ++i;
    }
    return acts;
  }

  std::vector<SluHypothesis> MakeSlu(const std::vector<AsrHypothesis>& asr,
                                     const std::vector<DialogAct>& machine) {
    std::vector<SluHypothesis> out;
    for (const auto& h : asr) {
      auto acts = Parse(h.text, machine);
      auto key = acts;
      std::sort(key.begin(), key.end());
      bool merged = false;
      for (auto& existing : out) {
        auto other = existing.acts;
        std::sort(other.begin(), other.end());
        if (other == key) {
          existing.probability = std::min(existing.probability + h.probability, 1.0);
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back({std::move(acts), h.probability});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.probability > b.probability; });
    return out;
  }

  BatchAsr MakeBatch(const Utterance& u) {
    BatchAsr batch;
    batch.nbest = MakeNbest(u, config_.asr_confusion_rate * 0.5);
    std::map<std::string, double> unigrams;
    for (const auto& h : batch.nbest) {
      std::set<std::string> words;
      for (const auto& w : Tokens(h.text)) words.insert(w);
      for (const auto& w : words) unigrams[w] += h.probability;
    }
    for (const auto& [w, p] : unigrams) batch.confusions.push_back({w, std::min(p, 1.0)});
    return batch;
  }

  LabeledDialog MakeDialog(size_t index) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s%05zu", config_.session_prefix.c_str(), index);
    LabeledDialog out;
    out.dialog.session_id = id;
    out.labels.session_id = id;

    std::map<std::string, std::string> goal, informed, heard;
    std::set<std::string> confirmed;
    for (const auto& slot : config_.slots) {
      auto forced = config_.forced_values.find(slot);
      goal[slot] = forced != config_.forced_values.end() ? forced->second : SampleGoal(slot);
    }
    const size_t length =
        config_.min_turns + rng_.Index(config_.max_turns - config_.min_turns + 1);
    std::vector<std::string> names = {"restaurant"};
    if (ontology_.HasSlot("name")) names = ontology_.values("name");

    for (size_t t = 0; t < length; ++t) {
      std::vector<DialogAct> machine;
      std::vector<std::string> unheard, unconfirmed;
      for (const auto& slot : config_.slots) {
        if (!heard.count(slot)) unheard.push_back(slot);
        if (heard.count(slot) && !confirmed.count(slot)) unconfirmed.push_back(slot);
      }
      if (t == 0) {
        machine.push_back({"welcomemsg", "", ""});
      } else if (!unconfirmed.empty() && rng_.Bernoulli(0.5)) {
        const auto& slot = unconfirmed[rng_.Index(unconfirmed.size())];
        machine.push_back({"confirm", slot, heard[slot]});
      } else if (!unheard.empty()) {
        machine.push_back({"request", unheard[rng_.Index(unheard.size())], ""});
      } else {
        machine.push_back({"offer", "name", names[rng_.Index(names.size())]});
      }

      UserTurn user;
      std::vector<std::string> uninformed, informed_slots;
      for (const auto& slot : config_.slots) {
        (informed.count(slot) ? informed_slots : uninformed).push_back(slot);
      }
      const DialogAct& m = machine.front();
      if (t + 1 == length && t > 0) {
        AppendText(user.utterance, "thank you goodbye");
        user.semantics.push_back({"bye", "", ""});
      } else if (t > 0 && !informed_slots.empty() && rng_.Bernoulli(config_.goal_change_rate)) {
        const auto& slot = informed_slots[rng_.Index(informed_slots.size())];
        goal[slot] = SampleOther(slot, goal[slot]);
        AppendText(user.utterance, "how about");
        AddInform(user, slot, goal[slot], false);
      } else if (m.act == "confirm") {
        if (goal[m.slot] == m.value) {
          AppendText(user.utterance, "yes");
          user.semantics.push_back({"affirm", "", ""});
        } else {
          AppendText(user.utterance, "no");
          user.semantics.push_back({"negate", "", ""});
          AddInform(user, m.slot, goal[m.slot], false);
        }
      } else if (m.act == "request") {
        AddInform(user, m.slot, goal[m.slot], true);
        std::vector<std::string> others;
        for (const auto& s : uninformed) {
          if (s != m.slot) others.push_back(s);
        }
        if (!others.empty() && rng_.Bernoulli(0.3)) {
          const auto& s = others[rng_.Index(others.size())];
          AddInform(user, s, goal[s], false);
        }
      } else if (t == 0) {
        if (rng_.Bernoulli(0.2) || uninformed.empty()) {
          AppendText(user.utterance, "hello i am looking for a restaurant");
          user.semantics.push_back({"hello", "", ""});
        } else {
          auto order = uninformed;
          rng_.Shuffle(order);
          const size_t count = std::min<size_t>(order.size(), 1 + rng_.Index(2));
          for (size_t k = 0; k < count; ++k) AddInform(user, order[k], goal[order[k]], false);
        }
      } else if (!uninformed.empty() && rng_.Bernoulli(0.5)) {
        const auto& s = uninformed[rng_.Index(uninformed.size())];
        AddInform(user, s, goal[s], false);
      } else {
        AppendText(user.utterance, "okay thank you");
        user.semantics.push_back({"thankyou", "", ""});
      }

      DialogTurn turn;
      turn.machine_acts = machine;
      turn.live_asr = MakeNbest(user.utterance, config_.asr_confusion_rate);
      turn.live_slu = MakeSlu(turn.live_asr, machine);
      if (config_.batch_asr) turn.batch_asr = MakeBatch(user.utterance);

      for (const auto& act : AffirmToInform(user.semantics, machine)) {
        if (act.act == "inform") informed[act.slot] = act.value;
      }
      TurnLabel label;
      label.goals = informed;
      label.semantics = user.semantics;
      label.transcription = Render(user.utterance);

      // The system's view comes from its own top SLU hypothesis.
      if (m.act == "confirm") {
        if (!turn.live_slu.empty()) {
          const auto& top = turn.live_slu.front().acts;
          if (std::find(top.begin(), top.end(), DialogAct{"affirm", "", ""}) != top.end()) {
            confirmed.insert(m.slot);
          } else if (std::find(top.begin(), top.end(), DialogAct{"negate", "", ""}) != top.end()) {
            heard.erase(m.slot);
          }
        }
      }
      if (!turn.live_slu.empty()) {
        for (const auto& act : turn.live_slu.front().acts) {
          if (act.act == "inform" && heard[act.slot] != act.value) {
            heard[act.slot] = act.value;
            confirmed.erase(act.slot);
          }
        }
      }
      for (auto it = heard.begin(); it != heard.end();) {
        it = it->second.empty() ? heard.erase(it) : std::next(it);
      }

      out.dialog.turns.push_back(std::move(turn));
      out.labels.turns.push_back(std::move(label));
    }
    return out;
  }

  const SyntheticConfig& config_;
  Ontology ontology_;
  Rng rng_;
  std::map<std::string, std::vector<std::string>> allowed_;
  std::vector<LexiconEntry> lexicon_;
};

void CheckRate(double r, const char* name) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in [0, 1], got " + std::to_string(r));
  }
}

}  // namespace

std::string SyntheticSlotPhrase(const std::string& slot) {
  if (slot == "pricerange") return "price range";
  return slot;
}

bool ContainsPhrase(const std::string& text, const std::string& phrase) {
  const auto t = Tokens(text);
  const auto p = Tokens(phrase);
  if (p.empty() || p.size() > t.size()) return false;
  for (size_t i = 0; i + p.size() <= t.size(); ++i) {
    if (std::equal(p.begin(), p.end(), t.begin() + i)) return true;
  }
  return false;
}

void SyntheticConfig::Validate() const {
  CheckRate(asr_confusion_rate, "asr_confusion_rate");
  CheckRate(goal_change_rate, "goal_change_rate");
  CheckRate(alias_rate, "alias_rate");
  CheckRate(dontcare_rate, "dontcare_rate");
  if (slots.empty()) throw ConfigError("synthetic corpus needs at least one slot");
  if (values_per_slot < 2) throw ConfigError("values_per_slot must be at least 2");
  if (min_turns < 1 || max_turns < min_turns) throw ConfigError("invalid turn range");
  for (const auto& s : slots) {
    if (s == "name") throw ConfigError("the name slot is not tracked and cannot be generated");
  }
  const Ontology ontology = SyntheticOntology(*this);
  for (const auto& a : alias_table) {
    if (!ontology.HasValue(a.slot, a.value)) {
      throw ConfigError("alias for unknown value " + a.slot + "=" + a.value);
    }
    if (a.phrase.empty()) throw ConfigError("empty alias phrase");
  }
  for (const auto& [slot, value] : forced_values) {
    if (!ontology.HasValue(slot, value)) throw ConfigError("forced unknown value " + slot + "=" + value);
  }
  for (const auto& [slot, values] : excluded_values) {
    for (const auto& v : values) {
      if (!ontology.HasValue(slot, v)) throw ConfigError("excluded unknown value " + slot + "=" + v);
    }
  }
}

Ontology SyntheticOntology(const SyntheticConfig& config) {
  std::map<std::string, std::vector<std::string>> values;
  for (const auto& slot : config.slots) {
    std::vector<std::string> list;
    auto it = ValuePools().find(slot);
    for (size_t i = 0; i < config.values_per_slot; ++i) {
      if (it != ValuePools().end() && i < it->second.size()) {
        list.push_back(it->second[i]);
      } else {
        list.push_back(slot + "value" + std::to_string(i));
      }
    }
    values[slot] = std::move(list);
  }
  if (config.include_name_slot) values["name"] = ValuePools().at("name");
  return Ontology(std::move(values));
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig& config) {
  config.Validate();
  return Generator(config).Run();
}

nlohmann::json SyntheticConfig::ToJson() const {
  nlohmann::json aliases = nlohmann::json::array();
  for (const auto& a : alias_table) {
    aliases.push_back({{"slot", a.slot}, {"value", a.value}, {"phrase", a.phrase}});
  }
  return {{"num_dialogs", num_dialogs},
          {"slots", slots},
          {"values_per_slot", values_per_slot},
          {"asr_confusion_rate", asr_confusion_rate},
          {"goal_change_rate", goal_change_rate},
          {"alias_table", aliases},
          {"alias_rate", alias_rate},
          {"dontcare_rate", dontcare_rate},
          {"min_turns", min_turns},
          {"max_turns", max_turns},
          {"batch_asr", batch_asr},
          {"include_name_slot", include_name_slot},
          {"excluded_values", excluded_values},
          {"forced_values", forced_values},
          {"seed", seed},
          {"session_prefix", session_prefix}};
}

SyntheticConfig SyntheticConfig::FromJson(const nlohmann::json& doc) {
  SyntheticConfig c;
  try {
    c.num_dialogs = doc.value("num_dialogs", c.num_dialogs);
    c.slots = doc.value("slots", c.slots);
    c.values_per_slot = doc.value("values_per_slot", c.values_per_slot);
    c.asr_confusion_rate = doc.value("asr_confusion_rate", c.asr_confusion_rate);
    c.goal_change_rate = doc.value("goal_change_rate", c.goal_change_rate);
    if (doc.contains("alias_table")) {
      for (const auto& a : doc.at("alias_table")) {
        c.alias_table.push_back({a.at("slot").get<std::string>(), a.at("value").get<std::string>(),
                                 a.at("phrase").get<std::string>()});
      }
    }
    c.alias_rate = doc.value("alias_rate", c.alias_rate);
    c.dontcare_rate = doc.value("dontcare_rate", c.dontcare_rate);
    c.min_turns = doc.value("min_turns", c.min_turns);
    c.max_turns = doc.value("max_turns", c.max_turns);
    c.batch_asr = doc.value("batch_asr", c.batch_asr);
    c.include_name_slot = doc.value("include_name_slot", c.include_name_slot);
    c.excluded_values = doc.value("excluded_values", c.excluded_values);
    c.forced_values = doc.value("forced_values", c.forced_values);
    c.seed = doc.value("seed", c.seed);
    c.session_prefix = doc.value("session_prefix", c.session_prefix);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid synthetic config: ") + e.what());
  }
  return c;
}

}  // namespace hdst
