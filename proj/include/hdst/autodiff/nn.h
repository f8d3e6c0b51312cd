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

#ifndef HDST_AUTODIFF_NN_H_
#define HDST_AUTODIFF_NN_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdst/autodiff/sparse.h"
#include "hdst/autodiff/tape.h"
#include "hdst/autodiff/tensor.h"

namespace hdst {

inline constexpr double kProbabilityFloor = 1e-12;

// Exp-normalization; throws NumericError on non-finite input.
std::vector<double> Softmax(std::span<const double> logits);

// -sum target * log(max(predicted, floor)). Both arguments must be
// distributions (sum 1 within 1e-6).
double CrossEntropy(std::span<const double> predicted, std::span<const double> target,
                    double floor = kProbabilityFloor);

enum class Activation { kLinear, kTanh, kSigmoid };

Activation ParseActivation(const std::string& name);
std::string ActivationName(Activation activation);

Var Activate(Tape& tape, Var x, Activation activation);

struct DenseLayer {
  ParamId weights;  // out x in
  ParamId bias;     // out
  Activation activation = Activation::kLinear;
};

DenseLayer AddDenseLayer(ParameterStore& store, const std::string& prefix, size_t in, size_t out,
                         Activation activation);

Var DenseForward(Tape& tape, Var input, const DenseLayer& layer);
// Applies the layers in order.
Var MlpForward(Tape& tape, Var input, std::span<const DenseLayer> layers);

// Plain LSTM state; hidden and memory have one entry per cell.
struct LstmCellState {
  std::vector<double> hidden;
  std::vector<double> memory;
};

// LSTM state recorded on a tape.
struct LstmTapeState {
  Var hidden;
  Var memory;
};

// Standard LSTM cell with tanh cell/output activations. Gate rows are laid
// out as [input, forget, output, candidate], each `cells` long. The input can
// have a sparse block, a dense block or both.
struct LstmParams {
  size_t cells = 0;
  std::optional<ParamId> sparse_input;  // 4*cells x sparse_dim
  std::optional<ParamId> dense_input;   // 4*cells x dense_dim
  ParamId recurrent;                    // 4*cells x cells
  ParamId bias;                         // 4*cells
};

LstmParams AddLstmParams(ParameterStore& store, const std::string& prefix, size_t cells,
                         size_t sparse_dim, size_t dense_dim);

struct LstmInput {
  const SparseVector* sparse = nullptr;
  Var dense;
};

LstmTapeState LstmZeroState(Tape& tape, size_t cells);
LstmTapeState LstmStep(Tape& tape, const LstmParams& params, const LstmInput& input,
                       const LstmTapeState& state);
// Convenience form over plain vectors (dense input only).
LstmCellState LstmStep(const ParameterStore& store, const LstmParams& params,
                       std::span<const double> input, const LstmCellState& state);

struct BiLstmParams {
  LstmParams forward;
  LstmParams backward;
};

// Runs both directions from zero states; output t is [forward_t, backward_t].
// Throws ContractViolation for an empty sequence.
std::vector<Var> BiLstm(Tape& tape, const BiLstmParams& params, std::span<const LstmInput> inputs);

}  // namespace hdst

#endif  // HDST_AUTODIFF_NN_H_
