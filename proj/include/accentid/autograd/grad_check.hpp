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

#ifndef ACCENTID_AUTOGRAD_GRAD_CHECK_HPP_
#define ACCENTID_AUTOGRAD_GRAD_CHECK_HPP_

#include <functional>
#include <string>
#include <vector>

#include "accentid/autograd/tape.hpp"
#include "accentid/common/rng.hpp"

namespace accentid::ag {

struct GradCheckReport {
  double max_rel_error = 0.0;
  size_t num_checked = 0;
  int worst_input = -1;
  size_t worst_coord = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference check of a scalar function built on a fresh f64 tape.
// `build` receives leaf vars for `inputs` in order and returns the scalar
// root. Relative error uses max(|analytic|, |numeric|, 1e-8) as denominator.
// When max_coords_per_input >= 0, a seeded subset of coordinates is checked
// per input; otherwise every coordinate is.
inline GradCheckReport grad_check(
    const std::function<Var(Tape<double>&, const std::vector<Var>&)>& build,
    const std::vector<Tensor<double>>& inputs, double h = 1e-4,
    int max_coords_per_input = -1, uint64_t seed = 12345) {
  GradCheckReport report;

  std::vector<Tensor<double>> analytic;
  {
    Tape<double> tape;
    std::vector<Var> leaves;
    leaves.reserve(inputs.size());
    for (const auto& t : inputs) leaves.push_back(tape.leaf(t, true));
    Var root = build(tape, leaves);
    ACCENTID_CHECK_ARG(tape.val(root).numel() == 1,
                       "grad_check target must be scalar");
    tape.backward(root);
    for (Var leaf : leaves) analytic.push_back(tape.grad(leaf));
  }

  auto eval_at = [&](const std::vector<Tensor<double>>& point) {
    Tape<double> tape;
    std::vector<Var> leaves;
    leaves.reserve(point.size());
    for (const auto& t : point) leaves.push_back(tape.leaf(t, false));
    Var root = build(tape, leaves);
    return tape.val(root)[0];
  };

  Rng rng(seed);
  std::vector<Tensor<double>> point = inputs;
  for (size_t i = 0; i < inputs.size(); ++i) {
    size_t n = inputs[i].numel();
    std::vector<size_t> coords;
    if (max_coords_per_input < 0 || n <= static_cast<size_t>(max_coords_per_input)) {
      coords.resize(n);
      for (size_t j = 0; j < n; ++j) coords[j] = j;
    } else {
      for (int k = 0; k < max_coords_per_input; ++k) {
        coords.push_back(rng.next_below(n));
      }
    }
    for (size_t j : coords) {
      double saved = point[i][j];
      point[i][j] = saved + h;
      double f_plus = eval_at(point);
      point[i][j] = saved - h;
      double f_minus = eval_at(point);
      point[i][j] = saved;
      double numeric = (f_plus - f_minus) / (2.0 * h);
      double a = analytic[i][j];
      double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      double rel = std::abs(a - numeric) / denom;
      ++report.num_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_input = static_cast<int>(i);
        report.worst_coord = j;
        report.worst_analytic = a;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_GRAD_CHECK_HPP_
