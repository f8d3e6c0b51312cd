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

#include "hdst/autodiff/nn.h"

#include <algorithm>
#include <cmath>

#include "hdst/common/errors.h"

namespace hdst {

std::vector<double> Softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("Softmax: empty input");
  for (double x : logits) {
    if (!std::isfinite(x)) throw NumericError("Softmax: non-finite logit");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

namespace {

void RequireDistribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < -1e-12) {
      throw ContractViolation(std::string(what) + " has a negative or non-finite entry");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw ContractViolation(std::string(what) + " does not sum to 1");
  }
}

}  // namespace

double CrossEntropy(std::span<const double> predicted, std::span<const double> target,
                    double floor) {
  if (predicted.size() != target.size()) throw ShapeError("CrossEntropy: length mismatch");
  RequireDistribution(predicted, "CrossEntropy: predicted");
  RequireDistribution(target, "CrossEntropy: target");
  double acc = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (target[i] != 0.0) acc -= target[i] * std::log(std::max(predicted[i], floor));
  }
  return acc;
}

Activation ParseActivation(const std::string& name) {
  if (name == "linear") return Activation::kLinear;
  if (name == "tanh") return Activation::kTanh;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation '" + name + "' (expected linear, tanh or sigmoid)");
}

std::string ActivationName(Activation activation) {
  switch (activation) {
    case Activation::kLinear:
      return "linear";
    case Activation::kTanh:
      return "tanh";
    case Activation::kSigmoid:
      return "sigmoid";
  }
  return "linear";
}

Var Activate(Tape& tape, Var x, Activation activation) {
  switch (activation) {
    case Activation::kLinear:
      return x;
    case Activation::kTanh:
      return tape.Tanh(x);
    case Activation::kSigmoid:
      return tape.Sigmoid(x);
  }
  return x;
}

DenseLayer AddDenseLayer(ParameterStore& store, const std::string& prefix, size_t in, size_t out,
                         Activation activation) {
  return DenseLayer{store.Add(prefix + "/W", {out, in}), store.Add(prefix + "/b", {out}),
                    activation};
}

Var DenseForward(Tape& tape, Var input, const DenseLayer& layer) {
  const Var pre = tape.Add(tape.MatVec(tape.Param(layer.weights), input), tape.Param(layer.bias));
  return Activate(tape, pre, layer.activation);
}

Var MlpForward(Tape& tape, Var input, std::span<const DenseLayer> layers) {
  Var x = input;
  for (const DenseLayer& layer : layers) x = DenseForward(tape, x, layer);
  return x;
}

LstmParams AddLstmParams(ParameterStore& store, const std::string& prefix, size_t cells,
                         size_t sparse_dim, size_t dense_dim) {
  if (cells == 0) throw ConfigError("LSTM needs at least one cell");
  LstmParams p;
  p.cells = cells;
  if (sparse_dim > 0) p.sparse_input = store.Add(prefix + "/Wsparse", {4 * cells, sparse_dim});
  if (dense_dim > 0) p.dense_input = store.Add(prefix + "/Wdense", {4 * cells, dense_dim});
  p.recurrent = store.Add(prefix + "/Wh", {4 * cells, cells});
  p.bias = store.Add(prefix + "/b", {4 * cells});
  return p;
}

LstmTapeState LstmZeroState(Tape& tape, size_t cells) {
  const std::vector<double> zeros(cells, 0.0);
  return {tape.Constant(zeros), tape.Constant(zeros)};
}

LstmTapeState LstmStep(Tape& tape, const LstmParams& params, const LstmInput& input,
                       const LstmTapeState& state) {
  const size_t n = params.cells;
  if (tape.size(state.hidden) != n || tape.size(state.memory) != n) {
    throw ShapeError("LstmStep: state size does not match cell count");
  }
  Var gates = tape.Add(tape.MatVec(tape.Param(params.recurrent), state.hidden),
                       tape.Param(params.bias));
  if (input.sparse != nullptr) {
    if (!params.sparse_input) throw ShapeError("LstmStep: cell has no sparse input block");
    gates = tape.Add(gates, tape.SparseMatVec(tape.Param(*params.sparse_input), *input.sparse));
  }
  if (input.dense.valid()) {
    if (!params.dense_input) throw ShapeError("LstmStep: cell has no dense input block");
    gates = tape.Add(gates, tape.MatVec(tape.Param(*params.dense_input), input.dense));
  }
  const Var in_gate = tape.Sigmoid(tape.Slice(gates, 0, n));
  const Var forget_gate = tape.Sigmoid(tape.Slice(gates, n, n));
  const Var out_gate = tape.Sigmoid(tape.Slice(gates, 2 * n, n));
  const Var candidate = tape.Tanh(tape.Slice(gates, 3 * n, n));
  const Var memory =
      tape.Add(tape.Mul(forget_gate, state.memory), tape.Mul(in_gate, candidate));
  const Var hidden = tape.Mul(out_gate, tape.Tanh(memory));
  return {hidden, memory};
}

LstmCellState LstmStep(const ParameterStore& store, const LstmParams& params,
                       std::span<const double> input, const LstmCellState& state) {
  Tape tape(&store);
  LstmTapeState prev{tape.Constant(state.hidden), tape.Constant(state.memory)};
  LstmInput in;
  in.dense = tape.Constant(input);
  const LstmTapeState next = LstmStep(tape, params, in, prev);
  const auto h = tape.value(next.hidden);
  const auto c = tape.value(next.memory);
  return {std::vector<double>(h.begin(), h.end()), std::vector<double>(c.begin(), c.end())};
}

std::vector<Var> BiLstm(Tape& tape, const BiLstmParams& params, std::span<const LstmInput> inputs) {
  if (inputs.empty()) throw ContractViolation("BiLstm: empty input sequence");
  const size_t len = inputs.size();
  std::vector<Var> forward(len), backward(len);
  LstmTapeState state = LstmZeroState(tape, params.forward.cells);
  for (size_t t = 0; t < len; ++t) {
    state = LstmStep(tape, params.forward, inputs[t], state);
    forward[t] = state.hidden;
  }
  state = LstmZeroState(tape, params.backward.cells);
  for (size_t t = len; t-- > 0;) {
    state = LstmStep(tape, params.backward, inputs[t], state);
    backward[t] = state.hidden;
  }
  std::vector<Var> out(len);
  for (size_t t = 0; t < len; ++t) {
    const Var parts[] = {forward[t], backward[t]};
    out[t] = tape.Concat(parts);
  }
  return out;
}

}  // namespace hdst
