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

#include "hdst/autodiff/tape.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hdst/common/errors.h"

namespace hdst {

Tape::Tape(const ParameterStore* params) : params_(params) {
  if (params_ == nullptr) throw ContractViolation("Tape requires a parameter store");
  param_nodes_.assign(params_->count(), -1);
}

void Tape::Clear() {
  nodes_.clear();
  args_.clear();
  values_.clear();
  sparse_.clear();
  targets_.clear();
  std::fill(param_nodes_.begin(), param_nodes_.end(), -1);
}

void Tape::CheckVar(Var v) const {
  if (v.index < 0 || static_cast<size_t>(v.index) >= nodes_.size()) {
    throw ContractViolation("Var does not belong to this tape");
  }
}

const double* Tape::value_ptr(Var v) const {
  const Node& n = nodes_[v.index];
  if (n.op == Op::kParam) return params_->Get(ParamId{n.aux}).values().data();
  return values_.data() + n.offset;
}

std::span<const double> Tape::value(Var v) const {
  CheckVar(v);
  const Node& n = nodes_[v.index];
  return {value_ptr(v), static_cast<size_t>(n.rows) * n.cols};
}

double Tape::scalar(Var v) const {
  CheckVar(v);
  if (size(v) != 1) throw ShapeError("scalar(): node is not a scalar");
  return value(v)[0];
}

Var Tape::Push(Op op, size_t rows, size_t cols, std::initializer_list<Var> args, size_t aux,
               double scalar) {
  return PushList(op, rows, cols, std::span<const Var>(args.begin(), args.size()), aux, scalar);
}

Var Tape::PushList(Op op, size_t rows, size_t cols, std::span<const Var> args, size_t aux,
                   double scalar) {
  for (Var a : args) CheckVar(a);
  Node n{op, static_cast<uint32_t>(rows), static_cast<uint32_t>(cols), values_.size(),
         static_cast<uint32_t>(args_.size()), static_cast<uint32_t>(args.size()), aux, scalar};
  for (Var a : args) args_.push_back(a.index);
  if (op != Op::kParam) values_.resize(values_.size() + rows * cols, 0.0);
  nodes_.push_back(n);
  Evaluate(nodes_.back());
  return Var{static_cast<int32_t>(nodes_.size() - 1)};
}

Var Tape::Param(ParamId id) {
  if (id.index >= params_->count()) throw ContractViolation("unknown parameter id");
  int32_t& cached = param_nodes_[id.index];
  if (cached >= 0) return Var{cached};
  const Tensor& t = params_->Get(id);
  const Var v = Push(Op::kParam, t.rows(), t.cols(), {}, id.index);
  cached = v.index;
  return v;
}

Var Tape::Constant(std::span<const double> values) { return Constant(values, values.size(), 1); }

Var Tape::Constant(std::span<const double> values, size_t rows, size_t cols) {
  if (rows * cols != values.size()) throw ShapeError("Constant: shape does not match values");
  const Var v = Push(Op::kConstant, rows, cols, {});
  std::copy(values.begin(), values.end(), values_.begin() + nodes_[v.index].offset);
  return v;
}

Var Tape::Scalar(double value) { return Constant(std::span<const double>(&value, 1)); }

Var Tape::SparseMatVec(Var w, const SparseVector& x) {
  CheckVar(w);
  const size_t cols = this->cols(w);
  size_t prev = 0;
  for (size_t k = 0; k < x.entries.size(); ++k) {
    const size_t idx = x.entries[k].index;
    if (idx >= cols) {
      throw ShapeError("SparseMatVec: index " + std::to_string(idx) + " outside " +
                       std::to_string(cols) + " columns");
    }
    if (k > 0 && idx <= prev) throw ContractViolation("SparseMatVec: indices not increasing");
    prev = idx;
  }
  sparse_.push_back(x);
  return Push(Op::kSparseMatVec, rows(w), 1, {w}, sparse_.size() - 1);
}

Var Tape::MatVec(Var w, Var x) {
  CheckVar(w);
  CheckVar(x);
  if (cols(w) != size(x)) {
    throw ShapeError("MatVec: " + std::to_string(rows(w)) + "x" + std::to_string(cols(w)) +
                     " times vector of " + std::to_string(size(x)));
  }
  return Push(Op::kMatVec, rows(w), 1, {w, x});
}

Var Tape::MatTVec(Var w, Var x) {
  CheckVar(w);
  CheckVar(x);
  if (rows(w) != size(x)) throw ShapeError("MatTVec: dimension mismatch");
  return Push(Op::kMatTVec, cols(w), 1, {w, x});
}

namespace {

void RequireSameSize(size_t a, size_t b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": size " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double StableSigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var Tape::Add(Var a, Var b) {
  CheckVar(a);
  CheckVar(b);
  RequireSameSize(size(a), size(b), "Add");
  return Push(Op::kAdd, rows(a), cols(a), {a, b});
}

Var Tape::Sub(Var a, Var b) {
  CheckVar(a);
  CheckVar(b);
  RequireSameSize(size(a), size(b), "Sub");
  return Push(Op::kSub, rows(a), cols(a), {a, b});
}

Var Tape::Mul(Var a, Var b) {
  CheckVar(a);
  CheckVar(b);
  RequireSameSize(size(a), size(b), "Mul");
  return Push(Op::kMul, rows(a), cols(a), {a, b});
}

Var Tape::Scale(Var a, double factor) {
  CheckVar(a);
  return Push(Op::kScale, rows(a), cols(a), {a}, 0, factor);
}

Var Tape::Broadcast(Var a, size_t n) {
  CheckVar(a);
  if (size(a) != 1) throw ShapeError("Broadcast: operand is not a scalar");
  return Push(Op::kBroadcast, n, 1, {a});
}

Var Tape::Sigmoid(Var a) {
  CheckVar(a);
  return Push(Op::kSigmoid, rows(a), cols(a), {a});
}

Var Tape::Tanh(Var a) {
  CheckVar(a);
  return Push(Op::kTanh, rows(a), cols(a), {a});
}

Var Tape::Exp(Var a) {
  CheckVar(a);
  return Push(Op::kExp, rows(a), cols(a), {a});
}

Var Tape::Sum(Var a) {
  CheckVar(a);
  return Push(Op::kSum, 1, 1, {a});
}

Var Tape::Concat(std::span<const Var> parts) {
  size_t total = 0;
  for (Var p : parts) {
    CheckVar(p);
    total += size(p);
  }
  return Concat(parts, total, 1);
}

Var Tape::Concat(std::span<const Var> parts, size_t rows, size_t cols) {
  size_t total = 0;
  for (Var p : parts) {
    CheckVar(p);
    total += size(p);
  }
  if (total != rows * cols) throw ShapeError("Concat: parts do not fill the requested shape");
  return PushList(Op::kConcat, rows, cols, parts);
}

Var Tape::Slice(Var a, size_t offset, size_t length) {
  CheckVar(a);
  if (offset + length > size(a)) throw ShapeError("Slice: range outside operand");
  return Push(Op::kSlice, length, 1, {a}, offset);
}

Var Tape::Softmax(Var logits) {
  CheckVar(logits);
  for (double x : value(logits)) {
    if (!std::isfinite(x)) throw NumericError("Softmax: non-finite logit");
  }
  return Push(Op::kSoftmax, size(logits), 1, {logits});
}

Var Tape::CrossEntropy(Var predicted, std::span<const double> target, double floor) {
  CheckVar(predicted);
  RequireSameSize(size(predicted), target.size(), "CrossEntropy");
  const size_t offset = targets_.size();
  targets_.insert(targets_.end(), target.begin(), target.end());
  return Push(Op::kCrossEntropy, 1, 1, {predicted}, offset, floor);
}

void Tape::Evaluate(const Node& n) {
  if (n.op == Op::kParam || n.op == Op::kConstant) return;
  double* out = mutable_value(n);
  const size_t len = static_cast<size_t>(n.rows) * n.cols;
  switch (n.op) {
    case Op::kSparseMatVec: {
      const Var w = arg(n, 0);
      const double* wv = value_ptr(w);
      const size_t wc = cols(w);
      for (const SparseEntry& e : sparse_[n.aux].entries) {
        for (size_t r = 0; r < n.rows; ++r) out[r] += wv[r * wc + e.index] * e.weight;
      }
      break;
    }
    case Op::kMatVec: {
      const Var w = arg(n, 0);
      const double* wv = value_ptr(w);
      const double* x = value_ptr(arg(n, 1));
      const size_t wc = cols(w);
      for (size_t r = 0; r < n.rows; ++r) {
        double acc = 0.0;
        const double* row = wv + r * wc;
        for (size_t c = 0; c < wc; ++c) acc += row[c] * x[c];
        out[r] = acc;
      }
      break;
    }
    case Op::kMatTVec: {
      const Var w = arg(n, 0);
      const double* wv = value_ptr(w);
      const double* x = value_ptr(arg(n, 1));
      const size_t wr = rows(w), wc = cols(w);
      for (size_t r = 0; r < wr; ++r) {
        for (size_t c = 0; c < wc; ++c) out[c] += wv[r * wc + c] * x[r];
      }
      break;
    }
    case Op::kAdd: {
      const double* a = value_ptr(arg(n, 0));
      const double* b = value_ptr(arg(n, 1));
      for (size_t i = 0; i < len; ++i) out[i] = a[i] + b[i];
      break;
    }
    case Op::kSub: {
      const double* a = value_ptr(arg(n, 0));
      const double* b = value_ptr(arg(n, 1));
      for (size_t i = 0; i < len; ++i) out[i] = a[i] - b[i];
      break;
    }
    case Op::kMul: {
      const double* a = value_ptr(arg(n, 0));
      const double* b = value_ptr(arg(n, 1));
      for (size_t i = 0; i < len; ++i) out[i] = a[i] * b[i];
      break;
    }
    case Op::kScale: {
      const double* a = value_ptr(arg(n, 0));
      for (size_t i = 0; i < len; ++i) out[i] = a[i] * n.scalar;
      break;
    }
    case Op::kBroadcast: {
      const double a = value_ptr(arg(n, 0))[0];
      std::fill(out, out + len, a);
      break;
    }
    case Op::kSigmoid: {
      const double* a = value_ptr(arg(n, 0));
      for (size_t i = 0; i < len; ++i) out[i] = StableSigmoid(a[i]);
      break;
    }
    case Op::kTanh: {
      const double* a = value_ptr(arg(n, 0));
      for (size_t i = 0; i < len; ++i) out[i] = std::tanh(a[i]);
      break;
    }
    case Op::kExp: {
      const double* a = value_ptr(arg(n, 0));
      for (size_t i = 0; i < len; ++i) out[i] = std::exp(a[i]);
      break;
    }
    case Op::kSum: {
      const Var a = arg(n, 0);
      const double* av = value_ptr(a);
      double acc = 0.0;
      for (size_t i = 0; i < size(a); ++i) acc += av[i];
      out[0] = acc;
      break;
    }
    case Op::kConcat: {
      size_t pos = 0;
      for (size_t k = 0; k < n.arg_count; ++k) {
        const Var p = arg(n, k);
        const double* pv = value_ptr(p);
        const size_t m = size(p);
        std::copy(pv, pv + m, out + pos);
        pos += m;
      }
      break;
    }
    case Op::kSlice: {
      const double* a = value_ptr(arg(n, 0)) + n.aux;
      std::copy(a, a + len, out);
      break;
    }
    case Op::kSoftmax: {
      const double* a = value_ptr(arg(n, 0));
      const double m = *std::max_element(a, a + len);
      double total = 0.0;
      for (size_t i = 0; i < len; ++i) {
        out[i] = std::exp(a[i] - m);
        total += out[i];
      }
      for (size_t i = 0; i < len; ++i) out[i] /= total;
      break;
    }
    case Op::kCrossEntropy: {
      const Var p = arg(n, 0);
      const double* pv = value_ptr(p);
      const double* t = targets_.data() + n.aux;
      double acc = 0.0;
      for (size_t i = 0; i < size(p); ++i) {
        if (t[i] != 0.0) acc -= t[i] * std::log(std::max(pv[i], n.scalar));
      }
      out[0] = acc;
      break;
    }
    case Op::kParam:
    case Op::kConstant:
      break;
  }
}

double* Tape::adjoint_ptr(Var v, GradientSet& grads) {
  const Node& n = nodes_[v.index];
  if (n.op == Op::kParam) return grads[ParamId{n.aux}].data();
  if (n.op == Op::kConstant) return nullptr;
  return adjoints_.data() + n.offset;
}

void Tape::BackwardNode(const Node& n, const double* adj, GradientSet& grads) {
  const size_t len = static_cast<size_t>(n.rows) * n.cols;
  switch (n.op) {
    case Op::kSparseMatVec: {
      const Var w = arg(n, 0);
      double* dw = adjoint_ptr(w, grads);
      if (!dw) break;
      const size_t wc = cols(w);
      for (const SparseEntry& e : sparse_[n.aux].entries) {
        for (size_t r = 0; r < n.rows; ++r) dw[r * wc + e.index] += adj[r] * e.weight;
      }
      break;
    }
    case Op::kMatVec: {
      const Var w = arg(n, 0), x = arg(n, 1);
      const double* wv = value_ptr(w);
      const double* xv = value_ptr(x);
      double* dw = adjoint_ptr(w, grads);
      double* dx = adjoint_ptr(x, grads);
      const size_t wc = cols(w);
      for (size_t r = 0; r < n.rows; ++r) {
        const double g = adj[r];
        if (g == 0.0) continue;
        if (dw) {
          double* row = dw + r * wc;
          for (size_t c = 0; c < wc; ++c) row[c] += g * xv[c];
        }
        if (dx) {
          const double* row = wv + r * wc;
          for (size_t c = 0; c < wc; ++c) dx[c] += g * row[c];
        }
      }
      break;
    }
    case Op::kMatTVec: {
      const Var w = arg(n, 0), x = arg(n, 1);
      const double* wv = value_ptr(w);
      const double* xv = value_ptr(x);
      double* dw = adjoint_ptr(w, grads);
      double* dx = adjoint_ptr(x, grads);
      const size_t wr = rows(w), wc = cols(w);
      for (size_t r = 0; r < wr; ++r) {
        for (size_t c = 0; c < wc; ++c) {
          if (dw) dw[r * wc + c] += xv[r] * adj[c];
          if (dx) dx[r] += wv[r * wc + c] * adj[c];
        }
      }
      break;
    }
    case Op::kAdd:
    case Op::kSub: {
      const double sign = n.op == Op::kAdd ? 1.0 : -1.0;
      double* da = adjoint_ptr(arg(n, 0), grads);
      double* db = adjoint_ptr(arg(n, 1), grads);
      for (size_t i = 0; i < len; ++i) {
        if (da) da[i] += adj[i];
        if (db) db[i] += sign * adj[i];
      }
      break;
    }
    case Op::kMul: {
      const Var a = arg(n, 0), b = arg(n, 1);
      const double* av = value_ptr(a);
      const double* bv = value_ptr(b);
      double* da = adjoint_ptr(a, grads);
      double* db = adjoint_ptr(b, grads);
      for (size_t i = 0; i < len; ++i) {
        if (da) da[i] += adj[i] * bv[i];
        if (db) db[i] += adj[i] * av[i];
      }
      break;
    }
    case Op::kScale: {
      double* da = adjoint_ptr(arg(n, 0), grads);
      if (!da) break;
      for (size_t i = 0; i < len; ++i) da[i] += adj[i] * n.scalar;
      break;
    }
    case Op::kBroadcast: {
      double* da = adjoint_ptr(arg(n, 0), grads);
      if (!da) break;
      double acc = 0.0;
      for (size_t i = 0; i < len; ++i) acc += adj[i];
      da[0] += acc;
      break;
    }
    case Op::kSigmoid:
    case Op::kTanh:
    case Op::kExp: {
      double* da = adjoint_ptr(arg(n, 0), grads);
      if (!da) break;
      const double* y = values_.data() + n.offset;
      for (size_t i = 0; i < len; ++i) {
        double d;
        if (n.op == Op::kSigmoid) {
          d = y[i] * (1.0 - y[i]);
        } else if (n.op == Op::kTanh) {
          d = 1.0 - y[i] * y[i];
        } else {
          d = y[i];
        }
        da[i] += adj[i] * d;
      }
      break;
    }
    case Op::kSum: {
      const Var a = arg(n, 0);
      double* da = adjoint_ptr(a, grads);
      if (!da) break;
      for (size_t i = 0; i < size(a); ++i) da[i] += adj[0];
      break;
    }
    case Op::kConcat: {
      size_t pos = 0;
      for (size_t k = 0; k < n.arg_count; ++k) {
        const Var p = arg(n, k);
        const size_t m = size(p);
        if (double* dp = adjoint_ptr(p, grads)) {
          for (size_t i = 0; i < m; ++i) dp[i] += adj[pos + i];
        }
        pos += m;
      }
      break;
    }
    case Op::kSlice: {
      double* da = adjoint_ptr(arg(n, 0), grads);
      if (!da) break;
      for (size_t i = 0; i < len; ++i) da[n.aux + i] += adj[i];
      break;
    }
    case Op::kSoftmax: {
      double* da = adjoint_ptr(arg(n, 0), grads);
      if (!da) break;
      const double* y = values_.data() + n.offset;
      double dot = 0.0;
      for (size_t i = 0; i < len; ++i) dot += adj[i] * y[i];
      for (size_t i = 0; i < len; ++i) da[i] += y[i] * (adj[i] - dot);
      break;
    }
    case Op::kCrossEntropy: {
      const Var p = arg(n, 0);
      double* dp = adjoint_ptr(p, grads);
      if (!dp) break;
      const double* pv = value_ptr(p);
      const double* t = targets_.data() + n.aux;
      for (size_t i = 0; i < size(p); ++i) {
        // Below the floor the loss is constant in p.
        if (t[i] != 0.0 && pv[i] > n.scalar) dp[i] -= adj[0] * t[i] / pv[i];
      }
      break;
    }
    case Op::kParam:
    case Op::kConstant:
      break;
  }
}

void Tape::Backward(Var loss, GradientSet& grads) {
  CheckVar(loss);
  if (size(loss) != 1) throw ContractViolation("Backward: loss node is not a scalar");
  if (grads.count() != params_->count()) throw ShapeError("Backward: gradient set layout mismatch");
  adjoints_.assign(values_.size(), 0.0);
  last_visits_ = 0;
  double* seed = adjoint_ptr(loss, grads);
  if (!seed) return;
  seed[0] += 1.0;
  for (int32_t i = loss.index; i >= 0; --i) {
    const Node& n = nodes_[i];
    if (n.op == Op::kParam || n.op == Op::kConstant) continue;
    BackwardNode(n, adjoints_.data() + n.offset, grads);
    ++last_visits_;
  }
}

GradientSet Tape::Backward(Var loss) {
  GradientSet grads(*params_);
  Backward(loss, grads);
  return grads;
}

}  // namespace hdst
