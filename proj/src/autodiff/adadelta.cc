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

#include "hdst/autodiff/adadelta.h"

#include <cmath>

#include "hdst/common/errors.h"

namespace hdst {

AdaDeltaState::AdaDeltaState(const ParameterStore& params, AdaDeltaConfig config)
    : config_(config) {
  if (!(config_.rho > 0.0 && config_.rho < 1.0)) throw ConfigError("AdaDelta rho must be in (0, 1)");
  if (!(config_.epsilon > 0.0)) throw ConfigError("AdaDelta epsilon must be positive");
  for (size_t i = 0; i < params.count(); ++i) {
    const size_t n = params.Get(ParamId{i}).size();
    sq_grad_.emplace_back(n, 0.0);
    sq_update_.emplace_back(n, 0.0);
  }
}

void AdaDeltaState::Update(ParameterStore& params, const GradientSet& grads) {
  if (params.count() != sq_grad_.size() || grads.count() != sq_grad_.size()) {
    throw ShapeError("AdaDelta: parameter layout mismatch");
  }
  const double rho = config_.rho;
  const double eps = config_.epsilon;
  for (size_t p = 0; p < sq_grad_.size(); ++p) {
    const ParamId id{p};
    auto x = params.GetMutable(id).mutable_values();
    const auto g = grads[id];
    if (x.size() != sq_grad_[p].size() || g.size() != x.size()) {
      throw ShapeError("AdaDelta: shape mismatch for " + params.Name(id));
    }
    auto& eg = sq_grad_[p];
    auto& edx = sq_update_[p];
    for (size_t i = 0; i < x.size(); ++i) {
      eg[i] = rho * eg[i] + (1.0 - rho) * g[i] * g[i];
      const double dx = -std::sqrt(edx[i] + eps) / std::sqrt(eg[i] + eps) * g[i];
      edx[i] = rho * edx[i] + (1.0 - rho) * dx * dx;
      x[i] += dx;
    }
  }
}

}  // namespace hdst
