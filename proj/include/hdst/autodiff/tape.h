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

#ifndef HDST_AUTODIFF_TAPE_H_
#define HDST_AUTODIFF_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdst/autodiff/sparse.h"
#include "hdst/autodiff/tensor.h"

namespace hdst {

// Handle to a node recorded on a Tape.
struct Var {
  int32_t index = -1;
  bool valid() const { return index >= 0; }
};

// Reverse-mode computation tape over vectors and matrices.
//
// Nodes are appended in evaluation order, so operands always precede their
// consumers and a single reverse sweep visits every node once. Parameters are
// referenced, never copied: their gradients are accumulated directly into the
// GradientSet passed to Backward(). A tape holds a read-only view of its
// ParameterStore, which must outlive it.
class Tape {
 public:
  explicit Tape(const ParameterStore* params);

  // Drops all nodes but keeps allocated memory.
  void Clear();

  Var Param(ParamId id);
  Var Constant(std::span<const double> values);
  Var Constant(std::span<const double> values, size_t rows, size_t cols);
  Var Scalar(double value);

  // W x for dense W (rows x cols) and sparse x with indices < cols.
  Var SparseMatVec(Var w, const SparseVector& x);
  Var MatVec(Var w, Var x);
  // W^T x.
  Var MatTVec(Var w, Var x);

  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Mul(Var a, Var b);
  Var Scale(Var a, double factor);
  // Vector of length n filled with the scalar a.
  Var Broadcast(Var a, size_t n);

  Var Sigmoid(Var a);
  Var Tanh(Var a);
  Var Exp(Var a);

  Var Sum(Var a);
  // Concatenates the operands' values; the result has shape rows x cols
  // (defaults to a column vector).
  Var Concat(std::span<const Var> parts);
  Var Concat(std::span<const Var> parts, size_t rows, size_t cols);
  Var Slice(Var a, size_t offset, size_t length);
  Var Element(Var a, size_t i) { return Slice(a, i, 1); }

  Var Softmax(Var logits);
  // -sum_i target_i * log(max(predicted_i, floor)); target is treated as a
  // constant.
  Var CrossEntropy(Var predicted, std::span<const double> target, double floor);

  std::span<const double> value(Var v) const;
  double scalar(Var v) const;
  size_t rows(Var v) const { return nodes_.at(v.index).rows; }
  size_t cols(Var v) const { return nodes_.at(v.index).cols; }
  size_t size(Var v) const { return rows(v) * cols(v); }
  size_t node_count() const { return nodes_.size(); }

  // Accumulates d(loss)/d(param) into grads for every parameter. Parameters
  // the loss does not depend on receive nothing (zero in a fresh set).
  void Backward(Var loss, GradientSet& grads);
  GradientSet Backward(Var loss);

  // Number of nodes whose backward rule ran during the last Backward().
  size_t last_backward_visits() const { return last_visits_; }

 private:
  enum class Op : uint8_t {
    kParam,
    kConstant,
    kSparseMatVec,
    kMatVec,
    kMatTVec,
    kAdd,
    kSub,
    kMul,
    kScale,
    kBroadcast,
    kSigmoid,
    kTanh,
    kExp,
    kSum,
    kConcat,
    kSlice,
    kSoftmax,
    kCrossEntropy,
  };

  struct Node {
    Op op;
    uint32_t rows;
    uint32_t cols;
    size_t offset;       // into values_ (non-parameter nodes)
    uint32_t arg_begin;  // into args_
    uint32_t arg_count;
    size_t aux;          // parameter index, sparse index, slice offset, target offset
    double scalar;       // scale factor or log floor
  };

  Var Push(Op op, size_t rows, size_t cols, std::initializer_list<Var> args,
           size_t aux = 0, double scalar = 0.0);
  Var PushList(Op op, size_t rows, size_t cols, std::span<const Var> args,
               size_t aux = 0, double scalar = 0.0);
  void CheckVar(Var v) const;
  Var arg(const Node& n, size_t i) const { return Var{args_[n.arg_begin + i]}; }
  double* mutable_value(const Node& n) { return values_.data() + n.offset; }
  const double* value_ptr(Var v) const;
  void Evaluate(const Node& n);
  void BackwardNode(const Node& n, const double* adj, GradientSet& grads);
  double* adjoint_ptr(Var v, GradientSet& grads);

  const ParameterStore* params_;
  std::vector<Node> nodes_;
  std::vector<int32_t> args_;
  std::vector<double> values_;
  std::vector<double> adjoints_;
  std::vector<SparseVector> sparse_;
  std::vector<double> targets_;
  std::vector<int32_t> param_nodes_;
  size_t last_visits_ = 0;
};

}  // namespace hdst

#endif  // HDST_AUTODIFF_TAPE_H_
