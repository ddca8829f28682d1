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

#ifndef ACCENTID_AUTOGRAD_BATCHNORM_HPP_
#define ACCENTID_AUTOGRAD_BATCHNORM_HPP_

#include <memory>
#include <vector>

#include "accentid/autograd/ops.hpp"

namespace accentid::ag {

// 1-D batch normalization over [B, C, T] (stats per channel across B*T) or
// [B, F] (stats per feature across B). Running stats use momentum 0.1 and
// population variance; eval mode before any train step is an error.
template <typename T>
struct BatchNorm1d {
  int channels = 0;
  Tensor<T> gamma, beta;
  Tensor<T> run_mean, run_var;
  bool initialized = false;
  double momentum = 0.1;
  double eps = 1e-5;

  BatchNorm1d() = default;
  explicit BatchNorm1d(int c)
      : channels(c),
        gamma(Tensor<T>::full({c}, T(1))),
        beta(Tensor<T>::zeros({c})),
        run_mean(Tensor<T>::zeros({c})),
        run_var(Tensor<T>::full({c}, T(1))) {}

  // gamma_v / beta_v are this layer's parameters, already on the tape.
  Var apply(Tape<T>& tape, Var gamma_v, Var beta_v, Var x, bool train) {
    const auto& xv = tape.val(x);
    ACCENTID_CHECK_ARG(xv.ndim() == 2 || xv.ndim() == 3, "batchnorm: bad rank");
    const bool temporal = xv.ndim() == 3;
    const int c_dim = temporal ? xv.dim(1) : xv.dim(1);
    ACCENTID_CHECK_ARG(c_dim == channels, "batchnorm: channel mismatch");
    const int b_dim = xv.dim(0);
    const int t_dim = temporal ? xv.dim(2) : 1;
    const size_t per_channel = static_cast<size_t>(b_dim) * t_dim;

    auto mean = std::make_shared<std::vector<double>>(channels, 0.0);
    auto inv_std = std::make_shared<std::vector<double>>(channels, 0.0);

    auto channel_ptr = [&](const Tensor<T>& t, int b, int c) -> const T* {
      return temporal ? &t.at(b, c, 0) : &t.at(b, c);
    };

    if (train) {
      for (int c = 0; c < channels; ++c) {
        double sum = 0.0, sq = 0.0;
        for (int b = 0; b < b_dim; ++b) {
          const T* p = channel_ptr(xv, b, c);
          for (int t = 0; t < t_dim; ++t) {
            double v = static_cast<double>(p[t]);
            sum += v;
            sq += v * v;
          }
        }
        double mu = sum / static_cast<double>(per_channel);
        double var = sq / static_cast<double>(per_channel) - mu * mu;
        if (var < 0.0) var = 0.0;
        (*mean)[static_cast<size_t>(c)] = mu;
        (*inv_std)[static_cast<size_t>(c)] = 1.0 / std::sqrt(var + eps);
        run_mean[static_cast<size_t>(c)] = static_cast<T>(
            (1.0 - momentum) * run_mean[static_cast<size_t>(c)] + momentum * mu);
        run_var[static_cast<size_t>(c)] = static_cast<T>(
            (1.0 - momentum) * run_var[static_cast<size_t>(c)] + momentum * var);
      }
      initialized = true;
    } else {
      ACCENTID_CHECK(initialized, ErrorCode::kState,
                     "batchnorm eval before any train step");
      for (int c = 0; c < channels; ++c) {
        (*mean)[static_cast<size_t>(c)] = run_mean[static_cast<size_t>(c)];
        (*inv_std)[static_cast<size_t>(c)] =
            1.0 / std::sqrt(static_cast<double>(run_var[static_cast<size_t>(c)]) + eps);
      }
    }

    const auto& gv = tape.val(gamma_v);
    const auto& bv = tape.val(beta_v);
    Tensor<T> out = xv;
    for (int c = 0; c < channels; ++c) {
      double mu = (*mean)[static_cast<size_t>(c)];
      double is = (*inv_std)[static_cast<size_t>(c)];
      double g = gv[static_cast<size_t>(c)], be = bv[static_cast<size_t>(c)];
      for (int b = 0; b < b_dim; ++b) {
        T* p = temporal ? &out.at(b, c, 0) : &out.at(b, c);
        for (int t = 0; t < t_dim; ++t) {
          p[t] = static_cast<T>((static_cast<double>(p[t]) - mu) * is * g + be);
        }
      }
    }

    bool rg = tape.requires_grad(x) || tape.requires_grad(gamma_v) ||
              tape.requires_grad(beta_v);
    if (!rg) return tape.make(std::move(out), false, nullptr);
    Var result{static_cast<int>(tape.size())};
    return tape.make(
        std::move(out), true,
        [&tape, x, gamma_v, beta_v, mean, inv_std, train, temporal, b_dim, t_dim,
         per_channel, result, this] {
          const auto& dy = tape.grad(result);
          const auto& xv2 = tape.val(x);
          const auto& gv2 = tape.val(gamma_v);
          for (int c = 0; c < channels; ++c) {
            double mu = (*mean)[static_cast<size_t>(c)];
            double is = (*inv_std)[static_cast<size_t>(c)];
            double g = gv2[static_cast<size_t>(c)];
            double sum_dy = 0.0, sum_dy_xhat = 0.0;
            for (int b = 0; b < b_dim; ++b) {
              const T* dp = temporal ? &dy.at(b, c, 0) : &dy.at(b, c);
              const T* xp = temporal ? &xv2.at(b, c, 0) : &xv2.at(b, c);
              for (int t = 0; t < t_dim; ++t) {
                double xhat = (static_cast<double>(xp[t]) - mu) * is;
                sum_dy += static_cast<double>(dp[t]);
                sum_dy_xhat += static_cast<double>(dp[t]) * xhat;
              }
            }
            if (tape.requires_grad(gamma_v)) {
              tape.grad(gamma_v)[static_cast<size_t>(c)] += static_cast<T>(sum_dy_xhat);
            }
            if (tape.requires_grad(beta_v)) {
              tape.grad(beta_v)[static_cast<size_t>(c)] += static_cast<T>(sum_dy);
            }
            if (tape.requires_grad(x)) {
              auto& dx = tape.grad(x);
              double n = static_cast<double>(per_channel);
              for (int b = 0; b < b_dim; ++b) {
                const T* dp = temporal ? &dy.at(b, c, 0) : &dy.at(b, c);
                const T* xp = temporal ? &xv2.at(b, c, 0) : &xv2.at(b, c);
                T* dxp = temporal ? &dx.at(b, c, 0) : &dx.at(b, c);
                for (int t = 0; t < t_dim; ++t) {
                  double xhat = (static_cast<double>(xp[t]) - mu) * is;
                  double v;
                  if (train) {
                    // Batch statistics depend on x.
                    v = g * is *
                        (static_cast<double>(dp[t]) - sum_dy / n - xhat * sum_dy_xhat / n);
                  } else {
                    v = g * is * static_cast<double>(dp[t]);
                  }
                  dxp[t] += static_cast<T>(v);
                }
              }
            }
          }
        });
  }
};

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_BATCHNORM_HPP_
