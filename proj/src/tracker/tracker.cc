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

#include "hdst/tracker/tracker.h"

#include <cmath>

#include "hdst/common/errors.h"
#include "hdst/data/dialog.h"

namespace hdst {
namespace {

void CheckDistribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation(std::string(what) + " has an entry outside [0, 1]");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ContractViolation(std::string(what) + " does not sum to 1");
}

}  // namespace

CNewCase ParseCNewCase(const std::string& name) {
  if (name == "vi_none") return CNewCase::kViNone;
  if (name == "vj_none") return CNewCase::kVjNone;
  throw ConfigError("unknown cnew_case: " + name);
}

std::string CNewCaseName(CNewCase c) { return c == CNewCase::kViNone ? "vi_none" : "vj_none"; }

nlohmann::json TrackerConfig::ToJson() const {
  return {{"recurrent_cells", recurrent_cells},
          {"correction_hidden", correction_hidden},
          {"cnew_case", CNewCaseName(cnew_case)},
          {"slu_lstm_cells", slu.lstm_cells},
          {"slu_hidden1", slu.hidden1},
          {"slu_hidden2", slu.hidden2},
          {"slu_activation", ActivationName(slu.activation)}};
}

TrackerConfig TrackerConfig::FromJson(const nlohmann::json& json) {
  TrackerConfig c;
  try {
    c.recurrent_cells = json.value("recurrent_cells", c.recurrent_cells);
    c.correction_hidden = json.value("correction_hidden", c.correction_hidden);
    c.cnew_case = ParseCNewCase(json.value("cnew_case", CNewCaseName(c.cnew_case)));
    c.slu.lstm_cells = json.value("slu_lstm_cells", c.slu.lstm_cells);
    c.slu.hidden1 = json.value("slu_hidden1", c.slu.hidden1);
    c.slu.hidden2 = json.value("slu_hidden2", c.slu.hidden2);
    c.slu.activation =
        ParseActivation(json.value("slu_activation", ActivationName(c.slu.activation)));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid tracker config: ") + e.what());
  }
  if (c.recurrent_cells == 0 || c.correction_hidden == 0 || c.slu.lstm_cells == 0 ||
      c.slu.hidden1 == 0 || c.slu.hidden2 == 0) {
    throw ConfigError("layer sizes must be positive");
  }
  if (c.slu.activation == Activation::kTanh) throw ConfigError("slu_activation must be linear or sigmoid");
  return c;
}

double ValueIndependentF(double c_new, double c_override, size_t i, size_t j, size_t none_index,
                         CNewCase cnew_case) {
  if (i == j) throw ContractViolation("F is undefined on the diagonal");
  const size_t keyed = cnew_case == CNewCase::kViNone ? i : j;
  return keyed == none_index ? c_new : c_override;
}

RecurrentOutput RecurrentL(Tape& tape, const RecurrentParams& params,
                           const SparseVector& turn_features, const LstmTapeState& prev) {
  RecurrentOutput out;
  out.state = LstmStep(tape, params.lstm, LstmInput{&turn_features, Var{}}, prev);
  out.scalars = DenseForward(tape, out.state.hidden, params.scalars);
  return out;
}

Var ValueDependentG(Tape& tape, const CorrectionParams& params, size_t slot_index,
                    const SparseVector& turn_features, const SparseVector& value_features) {
  Var hidden = tape.Add(tape.SparseMatVec(tape.Param(params.turn_weights), turn_features),
                        tape.Param(params.hidden_bias));
  hidden = tape.Add(hidden, tape.SparseMatVec(tape.Param(params.value_weights), value_features));
  return DenseForward(tape, hidden, params.out.at(slot_index));
}

std::vector<Var> ValueDependentGRows(Tape& tape, const CorrectionParams& params,
                                     size_t slot_index, const SparseVector& turn_features,
                                     std::span<const SparseVector> value_features) {
  const DenseLayer& head = params.out.at(slot_index);
  const Var hidden = tape.Add(tape.SparseMatVec(tape.Param(params.turn_weights), turn_features),
                              tape.Param(params.hidden_bias));
  const Var common = DenseForward(tape, hidden, head);
  std::vector<Var> rows;
  rows.reserve(value_features.size());
  for (const auto& fv : value_features) {
    if (fv.empty()) {
      rows.push_back(common);
    } else {
      const Var value_part = tape.SparseMatVec(tape.Param(params.value_weights), fv);
      rows.push_back(tape.Add(common, tape.MatVec(tape.Param(head.weights), value_part)));
    }
  }
  return rows;
}

Var ComposeCoefficients(Tape& tape, Var scalars, std::span<const Var> g_rows, size_t none_index,
                        CNewCase cnew_case) {
  const size_t k = g_rows.size();
  if (none_index >= k) throw ContractViolation("None index outside the candidate set");
  const Var c_new = tape.Element(scalars, 0);
  const Var c_override = tape.Element(scalars, 1);
  std::vector<Var> rows(k);
  if (cnew_case == CNewCase::kViNone) {
    const Var new_row = tape.Broadcast(c_new, k);
    const Var override_row = tape.Broadcast(c_override, k);
    for (size_t i = 0; i < k; ++i) {
      rows[i] = tape.Add(i == none_index ? new_row : override_row, g_rows[i]);
    }
  } else {
    std::vector<Var> parts(k, c_override);
    parts[none_index] = c_new;
    const Var f_row = tape.Concat(parts);
    for (size_t i = 0; i < k; ++i) rows[i] = tape.Add(f_row, g_rows[i]);
  }
  std::vector<double> mask(k * k, 1.0);
  for (size_t i = 0; i < k; ++i) mask[i * k + i] = 0.0;
  const Var logits = tape.Concat(rows, k, k);
  return tape.Mul(tape.Sigmoid(logits), tape.Constant(mask, k, k));
}

Var RuleUpdate(Tape& tape, Var h_prev, Var u, Var a) {
  const Var inflow = tape.Mul(u, tape.MatVec(a, h_prev));
  const Var outflow = tape.Mul(h_prev, tape.MatTVec(a, u));
  return tape.Add(tape.Sub(h_prev, outflow), inflow);
}

std::vector<double> RuleUpdate(std::span<const double> h_prev, std::span<const double> u,
                               std::span<const double> a) {
  const size_t k = h_prev.size();
  if (u.size() != k || a.size() != k * k) throw ShapeError("RuleUpdate: inconsistent sizes");
  CheckDistribution(h_prev, "previous belief");
  CheckDistribution(u, "SLU distribution");
  std::vector<double> masked(a.begin(), a.end());
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      if (i == j) {
        masked[i * k + j] = 0.0;
      } else if (!(a[i * k + j] >= 0.0 && a[i * k + j] <= 1.0)) {
        throw ContractViolation("transition coefficient outside [0, 1]");
      }
    }
  }
  static const ParameterStore kNoParams;
  Tape tape(&kNoParams);
  const Var h = RuleUpdate(tape, tape.Constant(h_prev), tape.Constant(u),
                           tape.Constant(masked, k, k));
  const auto v = tape.value(h);
  return {v.begin(), v.end()};
}

const SlotBeliefs& DialogBeliefs::slot(const std::string& name) const {
  for (const auto& s : slots) {
    if (s.slot == name) return s;
  }
  throw ContractViolation("no beliefs for slot " + name);
}

std::vector<nlohmann::ordered_json> DialogBeliefs::ToJsonLines() const {
  std::vector<nlohmann::ordered_json> lines;
  for (size_t t = 0; t < num_turns; ++t) {
    for (const auto& s : slots) {
      nlohmann::ordered_json dist = nlohmann::ordered_json::object();
      for (size_t k = 0; k < s.candidates.size(); ++k) dist[s.candidates[k]] = s.beliefs[t][k];
      nlohmann::ordered_json line;
      line["session_id"] = session_id;
      line["turn"] = t;
      line["slot"] = s.slot;
      line["distribution"] = std::move(dist);
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

TrackerModel::TrackerModel(TrackerConfig config, std::vector<CandidateSet> tracked,
                           std::vector<CandidateSet> fixed, size_t turn_dim, size_t value_dim)
    : config_(std::move(config)),
      tracked_(std::move(tracked)),
      fixed_(std::move(fixed)),
      turn_dim_(turn_dim),
      value_dim_(value_dim) {
  if (tracked_.empty()) throw ConfigError("the tracker needs at least one slot");
  if (turn_dim_ == 0 || value_dim_ == 0) throw ConfigError("feature dimensions must be positive");
  recurrent_.lstm = AddLstmParams(params_, "recurrent/lstm", config_.recurrent_cells, turn_dim_, 0);
  recurrent_.scalars =
      AddDenseLayer(params_, "recurrent/scalars", config_.recurrent_cells, 2, Activation::kLinear);
  const size_t hidden = config_.correction_hidden;
  correction_.turn_weights = params_.Add("correction/turn_W", {hidden, turn_dim_});
  correction_.value_weights = params_.Add("correction/value_W", {hidden, value_dim_});
  correction_.hidden_bias = params_.Add("correction/b", {hidden});
  for (const auto& c : tracked_) {
    correction_.out.push_back(
        AddDenseLayer(params_, "correction/out/" + c.slot(), hidden, c.size(), Activation::kLinear));
  }
  slu_ = AddSluParams(params_, config_.slu, turn_dim_, value_dim_, tracked_);
}

TrackerState TrackerModel::InitialState(Tape& tape, size_t slot_index) const {
  const CandidateSet& c = tracked_.at(slot_index);
  std::vector<double> h0(c.size(), 0.0);
  h0[c.none_index()] = 1.0;
  return {tape.Constant(h0), LstmZeroState(tape, config_.recurrent_cells)};
}

TurnOutput TrackerModel::TrackTurn(Tape& tape, size_t slot_index, const EncodedSlotTurn& turn,
                                   const TrackerState& state) const {
  const CandidateSet& c = tracked_.at(slot_index);
  const RecurrentOutput l = RecurrentL(tape, recurrent_, turn.turn_features, state.recurrent);
  const auto g_rows =
      ValueDependentGRows(tape, correction_, slot_index, turn.turn_features, turn.value_features);
  TurnOutput out;
  out.coefficients = ComposeCoefficients(tape, l.scalars, g_rows, c.none_index(), config_.cnew_case);
  const auto sequence =
      AssembleValueSequence(tape, c, turn.value_features, turn.informs, state.belief);
  out.slu = SluForward(tape, slu_, slot_index, sequence, turn.turn_features).u;
  out.state.belief = RuleUpdate(tape, state.belief, out.slu, out.coefficients);
  out.state.recurrent = l.state;
  return out;
}

std::vector<TurnOutput> TrackerModel::Unroll(Tape& tape, const EncodedSlot& slot,
                                             size_t slot_index) const {
  std::vector<TurnOutput> outputs;
  outputs.reserve(slot.turns.size());
  TrackerState state = InitialState(tape, slot_index);
  for (const auto& turn : slot.turns) {
    outputs.push_back(TrackTurn(tape, slot_index, turn, state));
    state = outputs.back().state;
  }
  return outputs;
}

void TrackerModel::CheckCompatible(const EncodedDialog& dialog) const {
  if (dialog.slots.size() != tracked_.size()) {
    throw ContractViolation("dialog " + dialog.session_id + " is encoded for " +
                            std::to_string(dialog.slots.size()) + " slots, the model tracks " +
                            std::to_string(tracked_.size()));
  }
  for (size_t s = 0; s < tracked_.size(); ++s) {
    if (dialog.slots[s].slot != tracked_[s].slot()) {
      throw ContractViolation("slot order mismatch: " + dialog.slots[s].slot + " vs " +
                              tracked_[s].slot());
    }
    if (dialog.slots[s].turns.size() != dialog.num_turns) {
      throw ContractViolation("slot " + dialog.slots[s].slot + " has a wrong turn count");
    }
    for (const auto& turn : dialog.slots[s].turns) {
      if (turn.value_features.size() != tracked_[s].size() ||
          turn.informs.size() != tracked_[s].size()) {
        throw ContractViolation("candidate set mismatch for slot " + tracked_[s].slot());
      }
    }
  }
}

DialogBeliefs TrackerModel::Track(const EncodedDialog& dialog) const {
  CheckCompatible(dialog);
  DialogBeliefs out;
  out.session_id = dialog.session_id;
  out.num_turns = dialog.num_turns;
  Tape tape(&params_);
  for (size_t s = 0; s < tracked_.size(); ++s) {
    tape.Clear();
    SlotBeliefs beliefs{tracked_[s].slot(), tracked_[s].values(), {}, {}};
    for (const auto& turn : Unroll(tape, dialog.slots[s], s)) {
      const auto h = tape.value(turn.state.belief);
      const auto u = tape.value(turn.slu);
      beliefs.beliefs.emplace_back(h.begin(), h.end());
      beliefs.slu.emplace_back(u.begin(), u.end());
    }
    out.slots.push_back(std::move(beliefs));
  }
  for (const auto& c : fixed_) {
    std::vector<double> none(c.size(), 0.0);
    none[c.none_index()] = 1.0;
    out.slots.push_back({c.slot(), c.values(),
                         std::vector<std::vector<double>>(dialog.num_turns, none), {}});
  }
  return out;
}

}  // namespace hdst
