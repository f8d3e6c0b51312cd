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

#ifndef HDST_TESTS_MODEL_FIXTURES_H_
#define HDST_TESTS_MODEL_FIXTURES_H_

#include <cmath>
#include <vector>

#include "hdst/autodiff/sparse.h"
#include "hdst/common/random.h"
#include "hdst/data/candidates.h"
#include "hdst/features/encoder.h"
#include "hdst/tracker/tracker.h"

namespace hdst::testing {

inline SparseVector RandomSparse(Rng& rng, size_t dim, size_t max_nnz) {
  SparseVector v;
  for (size_t i = 0; i < dim; ++i) {
    if (v.entries.size() < max_nnz && rng.Bernoulli(0.5)) v.entries.push_back({i, rng.Uniform(0.1, 1.0)});
  }
  return v;
}

inline std::vector<double> RandomDistribution(Rng& rng, size_t k) {
  std::vector<double> p(k);
  double total = 0.0;
  for (double& x : p) total += (x = rng.Uniform());
  for (double& x : p) x /= total;
  return p;
}

// Random labelled dialog over the given slots. Value features are random for
// every candidate but None.
inline EncodedDialog RandomEncodedDialog(Rng& rng, const std::vector<CandidateSet>& slots,
                                         size_t turns, size_t turn_dim, size_t value_dim) {
  EncodedDialog d;
  d.session_id = "random";
  d.num_turns = turns;
  for (const auto& c : slots) {
    EncodedSlot slot{c.slot(), {}};
    for (size_t t = 0; t < turns; ++t) {
      EncodedSlotTurn turn;
      turn.turn_features = RandomSparse(rng, turn_dim, 4);
      for (size_t k = 0; k < c.size(); ++k) {
        turn.value_features.push_back(k == c.none_index() ? SparseVector{}
                                                           : RandomSparse(rng, value_dim, 3));
      }
      turn.informs.assign(c.size(), 0.0);
      turn.informs[rng.Index(c.size())] = rng.Uniform();
      turn.goal = static_cast<int>(rng.Index(c.size()));
      turn.semantic = static_cast<int>(rng.Index(c.size()));
      slot.turns.push_back(std::move(turn));
    }
    d.slots.push_back(std::move(slot));
  }
  return d;
}

// Literal evaluation of the rule update over plain loops, skipping j == i.
inline std::vector<double> RuleOracle(const std::vector<double>& h, const std::vector<double>& u,
                                      const std::vector<double>& a) {
  const size_t k = h.size();
  std::vector<double> out(k);
  for (size_t i = 0; i < k; ++i) {
    double outflow = 0.0;
    double inflow = 0.0;
    for (size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      outflow += u[j] * a[j * k + i];
      inflow += h[j] * a[i * k + j];
    }
    out[i] = h[i] - h[i] * outflow + u[i] * inflow;
  }
  return out;
}

}  // namespace hdst::testing

#endif  // HDST_TESTS_MODEL_FIXTURES_H_
