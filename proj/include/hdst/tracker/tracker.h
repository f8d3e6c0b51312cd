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

#ifndef HDST_TRACKER_TRACKER_H_
#define HDST_TRACKER_TRACKER_H_

#include <span>
#include <string>
#include <vector>

#include "hdst/autodiff/nn.h"
#include "hdst/autodiff/sparse.h"
#include "hdst/autodiff/tape.h"
#include "hdst/autodiff/tensor.h"
#include "hdst/data/candidates.h"
#include "hdst/features/encoder.h"
#include "hdst/slu/slu.h"
#include "json.hpp"

namespace hdst {

// Which transitions the c_new scalar drives: those out of a None source
// candidate v_i, or those that take mass from None (v_j).
enum class CNewCase { kViNone, kVjNone };

CNewCase ParseCNewCase(const std::string& name);
std::string CNewCaseName(CNewCase c);

struct TrackerConfig {
  size_t recurrent_cells = 5;
  size_t correction_hidden = 20;
  CNewCase cnew_case = CNewCase::kViNone;
  SluConfig slu;

  nlohmann::json ToJson() const;
  static TrackerConfig FromJson(const nlohmann::json& json);
};

// Value-independent score F: c_new or c_override depending on whether the
// source (or, under kVjNone, the target) is None. Throws ContractViolation
// for i == j.
double ValueIndependentF(double c_new, double c_override, size_t i, size_t j, size_t none_index,
                         CNewCase cnew_case = CNewCase::kViNone);

// Recurrent unit L: one LSTM step over f_t and an affine map of the new
// hidden state to [c_new, c_override].
struct RecurrentParams {
  LstmParams lstm;
  DenseLayer scalars;
};

struct RecurrentOutput {
  Var scalars;  // [c_new, c_override]
  LstmTapeState state;
};

RecurrentOutput RecurrentL(Tape& tape, const RecurrentParams& params,
                           const SparseVector& turn_features, const LstmTapeState& prev);

// Value-dependent correction G: a linear MLP over [f_t; f_{v_i}] with one
// hidden layer; the output layer is per slot and indexed by v_j.
struct CorrectionParams {
  ParamId turn_weights;   // hidden x turn_dim
  ParamId value_weights;  // hidden x value_dim
  ParamId hidden_bias;
  std::vector<DenseLayer> out;  // per slot: hidden -> candidates
};

Var ValueDependentG(Tape& tape, const CorrectionParams& params, size_t slot_index,
                    const SparseVector& turn_features, const SparseVector& value_features);
// G rows for every source candidate. Uses linearity to share the f_t part.
std::vector<Var> ValueDependentGRows(Tape& tape, const CorrectionParams& params,
                                     size_t slot_index, const SparseVector& turn_features,
                                     std::span<const SparseVector> value_features);

// a[i][j] = sigmoid(F(i, j) + G_i[j]) as a K x K matrix with a zero diagonal.
Var ComposeCoefficients(Tape& tape, Var scalars, std::span<const Var> g_rows, size_t none_index,
                        CNewCase cnew_case);

// h_t = h - h * (A^T u) + u * (A h) for A with a zero diagonal.
Var RuleUpdate(Tape& tape, Var h_prev, Var u, Var a);
// Validating form over plain values; `a` is row-major K x K with the diagonal
// ignored. Throws ContractViolation for invalid distributions or
// coefficients outside [0, 1].
std::vector<double> RuleUpdate(std::span<const double> h_prev, std::span<const double> u,
                               std::span<const double> a);

struct TrackerState {
  Var belief;
  LstmTapeState recurrent;
};

struct TurnOutput {
  TrackerState state;
  Var slu;           // u
  Var coefficients;  // a
};

// Per-slot beliefs of one dialog.
struct SlotBeliefs {
  std::string slot;
  std::vector<std::string> candidates;
  std::vector<std::vector<double>> beliefs;  // per turn
  std::vector<std::vector<double>> slu;      // per turn; empty for fixed slots
};

struct DialogBeliefs {
  std::string session_id;
  size_t num_turns = 0;
  std::vector<SlotBeliefs> slots;  // tracked slots, then fixed slots

  const SlotBeliefs& slot(const std::string& name) const;
  // One record per turn per slot: {"turn", "slot", "distribution"}.
  std::vector<nlohmann::ordered_json> ToJsonLines() const;
};

// The full tracker: shared recurrent unit L, value-dependent corrections G and
// the SLU, with per-slot heads. Fixed slots (name) always report None.
class TrackerModel {
 public:
  TrackerModel(TrackerConfig config, std::vector<CandidateSet> tracked,
               std::vector<CandidateSet> fixed, size_t turn_dim, size_t value_dim);

  const TrackerConfig& config() const { return config_; }
  const std::vector<CandidateSet>& tracked() const { return tracked_; }
  const std::vector<CandidateSet>& fixed() const { return fixed_; }
  size_t turn_dim() const { return turn_dim_; }
  size_t value_dim() const { return value_dim_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }
  const RecurrentParams& recurrent() const { return recurrent_; }
  const CorrectionParams& correction() const { return correction_; }
  const SluParams& slu() const { return slu_; }

  // h_0 = delta(None), l_0 = 0.
  TrackerState InitialState(Tape& tape, size_t slot_index) const;
  TurnOutput TrackTurn(Tape& tape, size_t slot_index, const EncodedSlotTurn& turn,
                       const TrackerState& state) const;
  // All turns of one slot; one output per turn.
  std::vector<TurnOutput> Unroll(Tape& tape, const EncodedSlot& slot, size_t slot_index) const;

  DialogBeliefs Track(const EncodedDialog& dialog) const;

  // Checks that the encoded dialog matches the tracked slots and dimensions.
  void CheckCompatible(const EncodedDialog& dialog) const;

 private:
  TrackerConfig config_;
  std::vector<CandidateSet> tracked_;
  std::vector<CandidateSet> fixed_;
  size_t turn_dim_;
  size_t value_dim_;
  ParameterStore params_;
  RecurrentParams recurrent_;
  CorrectionParams correction_;
  SluParams slu_;
};

}  // namespace hdst

#endif  // HDST_TRACKER_TRACKER_H_
