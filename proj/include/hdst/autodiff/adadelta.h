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

#ifndef HDST_AUTODIFF_ADADELTA_H_
#define HDST_AUTODIFF_ADADELTA_H_

#include <vector>

#include "hdst/autodiff/tensor.h"

namespace hdst {

struct AdaDeltaConfig {
  double rho = 0.95;
  double epsilon = 1e-6;
};

// Running averages E[g^2] and E[dx^2], one buffer per parameter.
class AdaDeltaState {
 public:
  AdaDeltaState(const ParameterStore& params, AdaDeltaConfig config);

  const AdaDeltaConfig& config() const { return config_; }
  std::span<const double> squared_gradients(ParamId id) const { return sq_grad_[id.index]; }
  std::span<const double> squared_updates(ParamId id) const { return sq_update_[id.index]; }

  // One AdaDelta step:
  //   E[g^2] <- rho E[g^2] + (1 - rho) g^2
  //   dx     <- -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
  //   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
  //   x      <- x + dx
  void Update(ParameterStore& params, const GradientSet& grads);

 private:
  AdaDeltaConfig config_;
  std::vector<std::vector<double>> sq_grad_;
  std::vector<std::vector<double>> sq_update_;
};

}  // namespace hdst

#endif  // HDST_AUTODIFF_ADADELTA_H_
