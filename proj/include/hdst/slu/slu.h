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

#ifndef HDST_SLU_SLU_H_
#define HDST_SLU_SLU_H_

#include <span>
#include <string>
#include <vector>

#include "hdst/autodiff/nn.h"
#include "hdst/autodiff/sparse.h"
#include "hdst/autodiff/tape.h"
#include "hdst/autodiff/tensor.h"
#include "hdst/data/candidates.h"

namespace hdst {

struct SluConfig {
  size_t lstm_cells = 10;      // per direction of the value-scoring unit
  size_t hidden1 = 50;         // direct-mapping unit layer sizes
  size_t hidden2 = 20;
  Activation activation = Activation::kLinear;  // of every direct-mapping layer
};

// Value-scoring bidirectional LSTM over the candidates (unit B) and a
// direct-mapping MLP over turn features (unit M). The MLP's output layer is
// per slot because slots have different candidate counts.
struct SluParams {
  SluConfig config;
  BiLstmParams value_lstm;
  DenseLayer value_score;  // 2*cells -> 1, shared by all positions
  DenseLayer direct1;      // sparse turn features -> hidden1
  DenseLayer direct2;      // hidden1 -> hidden2
  std::vector<DenseLayer> direct_out;  // per slot: hidden2 -> candidates
};

// Creates parameters named "slu/..." for the given slots.
SluParams AddSluParams(ParameterStore& store, const SluConfig& config, size_t turn_dim,
                       size_t value_dim, std::span<const CandidateSet> slots);

// Per-candidate inputs of unit B in candidate order: sparse f_v plus the dense
// pair [i[v], h_prev[v]]. None must carry an empty f_v. Throws ShapeError when
// the sizes disagree with the candidate set.
std::vector<LstmInput> AssembleValueSequence(Tape& tape, const CandidateSet& candidates,
                                             std::span<const SparseVector> value_features,
                                             std::span<const double> informs, Var h_prev);

struct SluOutput {
  Var u;       // distribution over candidates
  Var scores;  // unit B logits (u^1)
  Var direct;  // unit M logits (u^2)
};

// u = softmax(B(sequence) + M(f_t)).
SluOutput SluForward(Tape& tape, const SluParams& params, size_t slot_index,
                     std::span<const LstmInput> sequence, const SparseVector& turn_features);

// Cross-entropy of u against the one-hot target candidate.
Var SluLoss(Tape& tape, Var u, size_t target);
double SluLoss(std::span<const double> u, size_t target);

}  // namespace hdst

#endif  // HDST_SLU_SLU_H_
