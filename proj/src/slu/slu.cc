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

#include "hdst/slu/slu.h"

#include "hdst/common/errors.h"

namespace hdst {

SluParams AddSluParams(ParameterStore& store, const SluConfig& config, size_t turn_dim,
                       size_t value_dim, std::span<const CandidateSet> slots) {
  SluParams p;
  p.config = config;
  p.value_lstm.forward = AddLstmParams(store, "slu/value_lstm/fwd", config.lstm_cells, value_dim, 2);
  p.value_lstm.backward = AddLstmParams(store, "slu/value_lstm/bwd", config.lstm_cells, value_dim, 2);
  p.value_score = AddDenseLayer(store, "slu/value_score", 2 * config.lstm_cells, 1,
                                Activation::kLinear);
  p.direct1 = AddDenseLayer(store, "slu/direct1", turn_dim, config.hidden1, config.activation);
  p.direct2 = AddDenseLayer(store, "slu/direct2", config.hidden1, config.hidden2, config.activation);
  for (const auto& slot : slots) {
    p.direct_out.push_back(AddDenseLayer(store, "slu/direct_out/" + slot.slot(), config.hidden2,
                                         slot.size(), config.activation));
  }
  return p;
}

std::vector<LstmInput> AssembleValueSequence(Tape& tape, const CandidateSet& candidates,
                                             std::span<const SparseVector> value_features,
                                             std::span<const double> informs, Var h_prev) {
  const size_t k = candidates.size();
  if (value_features.size() != k || informs.size() != k || tape.size(h_prev) != k) {
    throw ShapeError("value sequence inputs do not match the " + std::to_string(k) +
                     " candidates of slot " + candidates.slot());
  }
  if (!value_features[candidates.none_index()].empty()) {
    throw ContractViolation("None must not carry value features");
  }
  std::vector<LstmInput> sequence(k);
  for (size_t i = 0; i < k; ++i) {
    const Var pair[] = {tape.Scalar(informs[i]), tape.Element(h_prev, i)};
    sequence[i].sparse = &value_features[i];
    sequence[i].dense = tape.Concat(pair);
  }
  return sequence;
}

SluOutput SluForward(Tape& tape, const SluParams& params, size_t slot_index,
                     std::span<const LstmInput> sequence, const SparseVector& turn_features) {
  const DenseLayer& head = params.direct_out.at(slot_index);
  const size_t k = tape.rows(tape.Param(head.bias));
  if (sequence.size() != k) {
    throw ShapeError("value sequence has " + std::to_string(sequence.size()) +
                     " positions for " + std::to_string(k) + " candidates");
  }
  const auto states = BiLstm(tape, params.value_lstm, sequence);
  std::vector<Var> scores;
  scores.reserve(k);
  for (const Var& s : states) scores.push_back(DenseForward(tape, s, params.value_score));
  SluOutput out;
  out.scores = tape.Concat(scores);

  Var x = tape.Add(tape.SparseMatVec(tape.Param(params.direct1.weights), turn_features),
                   tape.Param(params.direct1.bias));
  x = Activate(tape, x, params.direct1.activation);
  x = DenseForward(tape, x, params.direct2);
  out.direct = DenseForward(tape, x, head);
  out.u = tape.Softmax(tape.Add(out.scores, out.direct));
  return out;
}

Var SluLoss(Tape& tape, Var u, size_t target) {
  std::vector<double> one_hot(tape.size(u), 0.0);
  one_hot.at(target) = 1.0;
  return tape.CrossEntropy(u, one_hot, kProbabilityFloor);
}

double SluLoss(std::span<const double> u, size_t target) {
  std::vector<double> one_hot(u.size(), 0.0);
  one_hot.at(target) = 1.0;
  return CrossEntropy(u, one_hot, kProbabilityFloor);
}

}  // namespace hdst
