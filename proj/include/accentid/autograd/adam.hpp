// Copyright 2026 The accentid authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACCENTID_AUTOGRAD_ADAM_HPP_
#define ACCENTID_AUTOGRAD_ADAM_HPP_

#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "accentid/autograd/tensor.hpp"
#include "accentid/common/error.hpp"

namespace accentid::ag {

struct AdamState {
  struct Slot {
    Tensor<float> m, v;
  };
  std::unordered_map<std::string, Slot> slots;
  int64_t step = 0;
};

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One standard Adam update with bias correction. Parameters are matched to
// gradients by position; slots are created on first use. Non-finite
// gradients abort with diagnostics rather than corrupting the model.
inline void adam_step(
    const std::vector<std::pair<std::string, Tensor<float>*>>& params,
    const std::vector<const Tensor<float>*>& grads, AdamState& state,
    const AdamHyper& hyper) {
  ACCENTID_CHECK_ARG(params.size() == grads.size(),
                     "adam_step: param/grad count mismatch");
  state.step += 1;
  double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    const auto& name = params[i].first;
    Tensor<float>& p = *params[i].second;
    const Tensor<float>& g = *grads[i];
    ACCENTID_CHECK_ARG(p.same_shape(g),
                       "adam_step: shape mismatch for " << name);
    ACCENTID_CHECK(g.all_finite(), ErrorCode::kNumeric,
                   "non-finite gradient for " << name << " at step "
                                              << state.step);
    auto [it, inserted] = state.slots.try_emplace(name);
    if (inserted) {
      it->second.m = Tensor<float>::zeros(p.shape);
      it->second.v = Tensor<float>::zeros(p.shape);
    }
    auto& slot = it->second;
    ACCENTID_CHECK_ARG(slot.m.same_shape(p),
                       "adam_step: stale state for " << name);
    for (size_t j = 0; j < p.numel(); ++j) {
      double gj = g[j];
      double m = hyper.beta1 * slot.m[j] + (1.0 - hyper.beta1) * gj;
      double v = hyper.beta2 * slot.v[j] + (1.0 - hyper.beta2) * gj * gj;
      slot.m[j] = static_cast<float>(m);
      slot.v[j] = static_cast<float>(v);
      double m_hat = m / bc1;
      double v_hat = v / bc2;
      p[j] -= static_cast<float>(hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps));
    }
  }
}

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_ADAM_HPP_
