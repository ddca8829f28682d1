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

#ifndef ACCENTID_AUTOGRAD_OPS_HPP_
#define ACCENTID_AUTOGRAD_OPS_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "accentid/autograd/tape.hpp"

namespace accentid::ag {

template <typename T>
using EigenMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<EigenMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const EigenMat<T>>;

// ---------------------------------------------------------------------------
// Elementwise and reduction primitives
// ---------------------------------------------------------------------------

template <typename T>
Var add(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.val(a);
  const auto& bv = tape.val(b);
  ACCENTID_CHECK_ARG(av.same_shape(bv), "add: shape mismatch");
  Tensor<T> out = av;
  for (size_t i = 0; i < out.numel(); ++i) out[i] += bv[i];
  bool rg = tape.requires_grad(a) || tape.requires_grad(b);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, a, b, result] {
    const auto& dy = tape.grad(result);
    if (tape.requires_grad(a)) {
      auto& da = tape.grad(a);
      for (size_t i = 0; i < dy.numel(); ++i) da[i] += dy[i];
    }
    if (tape.requires_grad(b)) {
      auto& db = tape.grad(b);
      for (size_t i = 0; i < dy.numel(); ++i) db[i] += dy[i];
    }
  });
}

template <typename T>
Var scale(Tape<T>& tape, Var x, T factor) {
  Tensor<T> out = tape.val(x);
  for (auto& v : out.data) v *= factor;
  if (!tape.requires_grad(x)) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, x, factor, result] {
    const auto& dy = tape.grad(result);
    auto& dx = tape.grad(x);
    for (size_t i = 0; i < dy.numel(); ++i) dx[i] += factor * dy[i];
  });
}

template <typename T>
Var relu(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  Tensor<T> out = xv;
  for (auto& v : out.data) v = v > T(0) ? v : T(0);
  if (!tape.requires_grad(x)) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, x, result] {
    const auto& dy = tape.grad(result);
    const auto& xv2 = tape.val(x);
    auto& dx = tape.grad(x);
    for (size_t i = 0; i < dy.numel(); ++i) {
      if (xv2[i] > T(0)) dx[i] += dy[i];
    }
  });
}

template <typename T>
Var sigmoid(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  Tensor<T> out = xv;
  for (auto& v : out.data) v = T(1) / (T(1) + std::exp(-v));
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, result] {
    const auto& dy = tape.grad(result);
    const auto& yv = tape.val(result);
    auto& dx = tape.grad(x);
    for (size_t i = 0; i < dy.numel(); ++i) {
      dx[i] += dy[i] * yv[i] * (T(1) - yv[i]);
    }
  });
}

template <typename T>
Var log_op(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  Tensor<T> out = xv;
  for (auto& v : out.data) {
    ACCENTID_CHECK(v > T(0), ErrorCode::kNumeric, "log of non-positive value");
    v = std::log(v);
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, result] {
    const auto& dy = tape.grad(result);
    const auto& xv2 = tape.val(x);
    auto& dx = tape.grad(x);
    for (size_t i = 0; i < dy.numel(); ++i) dx[i] += dy[i] / xv2[i];
  });
}

template <typename T>
Var mean_all(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.numel() > 0, "mean of empty tensor");
  double acc = 0.0;
  for (T v : xv.data) acc += static_cast<double>(v);
  Tensor<T> out({1}, {static_cast<T>(acc / xv.numel())});
  bool rg = tape.requires_grad(x);
  size_t n = xv.numel();
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, n, result] {
    T g = tape.grad(result)[0] / static_cast<T>(n);
    auto& dx = tape.grad(x);
    for (size_t i = 0; i < dx.numel(); ++i) dx[i] += g;
  });
}

// Row-wise softmax of a [R, C] tensor.
template <typename T>
Var softmax(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.ndim() == 2, "softmax expects a 2-D tensor");
  int rows = xv.dim(0), cols = xv.dim(1);
  Tensor<T> out = xv;
  for (int r = 0; r < rows; ++r) {
    T* p = out.data.data() + static_cast<size_t>(r) * cols;
    T mx = *std::max_element(p, p + cols);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) {
      p[c] = std::exp(p[c] - mx);
      sum += static_cast<double>(p[c]);
    }
    for (int c = 0; c < cols; ++c) p[c] = static_cast<T>(p[c] / sum);
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, rows, cols, result] {
    const auto& dy = tape.grad(result);
    const auto& yv = tape.val(result);
    auto& dx = tape.grad(x);
    for (int r = 0; r < rows; ++r) {
      size_t off = static_cast<size_t>(r) * cols;
      double dot = 0.0;
      for (int c = 0; c < cols; ++c) dot += static_cast<double>(dy[off + c]) * yv[off + c];
      for (int c = 0; c < cols; ++c) {
        dx[off + c] += yv[off + c] * (dy[off + c] - static_cast<T>(dot));
      }
    }
  });
}

// Row-wise log-softmax of a [R, C] tensor (numerically stable).
template <typename T>
Var log_softmax(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.ndim() == 2, "log_softmax expects a 2-D tensor");
  int rows = xv.dim(0), cols = xv.dim(1);
  Tensor<T> out = xv;
  for (int r = 0; r < rows; ++r) {
    T* p = out.data.data() + static_cast<size_t>(r) * cols;
    T mx = *std::max_element(p, p + cols);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) sum += std::exp(static_cast<double>(p[c] - mx));
    T lse = mx + static_cast<T>(std::log(sum));
    for (int c = 0; c < cols; ++c) p[c] -= lse;
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, rows, cols, result] {
    const auto& dy = tape.grad(result);
    const auto& yv = tape.val(result);
    auto& dx = tape.grad(x);
    for (int r = 0; r < rows; ++r) {
      size_t off = static_cast<size_t>(r) * cols;
      double sum_dy = 0.0;
      for (int c = 0; c < cols; ++c) sum_dy += static_cast<double>(dy[off + c]);
      for (int c = 0; c < cols; ++c) {
        dx[off + c] += dy[off + c] -
                       static_cast<T>(std::exp(static_cast<double>(yv[off + c])) * sum_dy);
      }
    }
  });
}

// Concatenation along `axis` (all other dims equal).
template <typename T>
Var concat(Tape<T>& tape, const std::vector<Var>& parts, int axis) {
  ACCENTID_CHECK_ARG(!parts.empty(), "concat of nothing");
  const auto& first = tape.val(parts[0]);
  int nd = first.ndim();
  ACCENTID_CHECK_ARG(axis >= 0 && axis < nd, "concat axis out of range");
  std::vector<int> out_shape = first.shape;
  int total = 0;
  for (Var p : parts) {
    const auto& v = tape.val(p);
    ACCENTID_CHECK_ARG(v.ndim() == nd, "concat rank mismatch");
    for (int d = 0; d < nd; ++d) {
      if (d != axis) {
        ACCENTID_CHECK_ARG(v.dim(d) == first.dim(d), "concat shape mismatch");
      }
    }
    total += v.dim(axis);
  }
  out_shape[static_cast<size_t>(axis)] = total;

  // View every tensor as [outer, axis_dim * inner] blocks.
  size_t outer = 1, inner = 1;
  for (int d = 0; d < axis; ++d) outer *= static_cast<size_t>(first.dim(d));
  for (int d = axis + 1; d < nd; ++d) inner *= static_cast<size_t>(first.dim(d));

  Tensor<T> out = Tensor<T>::zeros(out_shape);
  size_t out_row = static_cast<size_t>(total) * inner;
  std::vector<size_t> offsets(parts.size());
  {
    size_t off = 0;
    for (size_t i = 0; i < parts.size(); ++i) {
      offsets[i] = off;
      const auto& v = tape.val(parts[i]);
      size_t row = static_cast<size_t>(v.dim(axis)) * inner;
      for (size_t o = 0; o < outer; ++o) {
        std::copy(v.data.begin() + o * row, v.data.begin() + (o + 1) * row,
                  out.data.begin() + o * out_row + off);
      }
      off += row;
    }
  }
  bool rg = false;
  for (Var p : parts) rg = rg || tape.requires_grad(p);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  auto parts_copy = parts;
  return tape.make(std::move(out), true,
                   [&tape, parts_copy, offsets, outer, inner, out_row, result] {
    const auto& dy = tape.grad(result);
    for (size_t i = 0; i < parts_copy.size(); ++i) {
      if (!tape.requires_grad(parts_copy[i])) continue;
      auto& dp = tape.grad(parts_copy[i]);
      const auto& pv = tape.val(parts_copy[i]);
      size_t row = pv.numel() / outer;
      for (size_t o = 0; o < outer; ++o) {
        const T* src = dy.data.data() + o * out_row + offsets[i];
        T* dst = dp.data.data() + o * row;
        for (size_t k = 0; k < row; ++k) dst[k] += src[k];
      }
    }
  });
}

// Channel slice [c0, c1) of a [B, C, T] tensor.
template <typename T>
Var slice_channels(Tape<T>& tape, Var x, int c0, int c1) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.ndim() == 3, "slice_channels expects [B, C, T]");
  ACCENTID_CHECK_ARG(0 <= c0 && c0 < c1 && c1 <= xv.dim(1), "bad channel range");
  int b_dim = xv.dim(0), c_dim = xv.dim(1), t_dim = xv.dim(2);
  Tensor<T> out = Tensor<T>::zeros({b_dim, c1 - c0, t_dim});
  for (int b = 0; b < b_dim; ++b) {
    for (int c = c0; c < c1; ++c) {
      for (int t = 0; t < t_dim; ++t) out.at(b, c - c0, t) = xv.at(b, c, t);
    }
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, c0, c1, result] {
    const auto& dy = tape.grad(result);
    auto& dx = tape.grad(x);
    int b_dim = dy.dim(0), t_dim = dy.dim(2);
    for (int b = 0; b < b_dim; ++b) {
      for (int c = c0; c < c1; ++c) {
        for (int t = 0; t < t_dim; ++t) dx.at(b, c, t) += dy.at(b, c - c0, t);
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Matrix / network primitives
// ---------------------------------------------------------------------------

template <typename T>
Var matmul(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.val(a);
  const auto& bv = tape.val(b);
  ACCENTID_CHECK_ARG(av.ndim() == 2 && bv.ndim() == 2 && av.dim(1) == bv.dim(0),
                     "matmul: incompatible shapes");
  int m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  Tensor<T> out = Tensor<T>::zeros({m, n});
  {
    ConstMatMap<T> A(av.data.data(), m, k), B(bv.data.data(), k, n);
    MatMap<T> C(out.data.data(), m, n);
    C.noalias() = A * B;
  }
  bool rg = tape.requires_grad(a) || tape.requires_grad(b);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, a, b, m, k, n, result] {
    const auto& dy = tape.grad(result);
    ConstMatMap<T> dY(dy.data.data(), m, n);
    const auto& av2 = tape.val(a);
    const auto& bv2 = tape.val(b);
    ConstMatMap<T> A(av2.data.data(), m, k), B(bv2.data.data(), k, n);
    if (tape.requires_grad(a)) {
      MatMap<T> dA(tape.grad(a).data.data(), m, k);
      dA.noalias() += dY * B.transpose();
    }
    if (tape.requires_grad(b)) {
      MatMap<T> dB(tape.grad(b).data.data(), k, n);
      dB.noalias() += A.transpose() * dY;
    }
  });
}

// y = x * W^T + bias for x [B, F], W [G, F], bias [G].
template <typename T>
Var linear(Tape<T>& tape, Var x, Var w, Var bias) {
  const auto& xv = tape.val(x);
  const auto& wv = tape.val(w);
  const auto& bv = tape.val(bias);
  ACCENTID_CHECK_ARG(xv.ndim() == 2 && wv.ndim() == 2 && bv.ndim() == 1 &&
                         xv.dim(1) == wv.dim(1) && bv.dim(0) == wv.dim(0),
                     "linear: incompatible shapes");
  int batch = xv.dim(0), in_dim = xv.dim(1), out_dim = wv.dim(0);
  Tensor<T> out = Tensor<T>::zeros({batch, out_dim});
  {
    ConstMatMap<T> X(xv.data.data(), batch, in_dim), W(wv.data.data(), out_dim, in_dim);
    MatMap<T> Y(out.data.data(), batch, out_dim);
    Y.noalias() = X * W.transpose();
    for (int r = 0; r < batch; ++r) {
      for (int c = 0; c < out_dim; ++c) out.at(r, c) += bv[static_cast<size_t>(c)];
    }
  }
  bool rg = tape.requires_grad(x) || tape.requires_grad(w) || tape.requires_grad(bias);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, x, w, bias, batch, in_dim, out_dim, result] {
    const auto& dy = tape.grad(result);
    ConstMatMap<T> dY(dy.data.data(), batch, out_dim);
    const auto& xv2 = tape.val(x);
    const auto& wv2 = tape.val(w);
    ConstMatMap<T> X(xv2.data.data(), batch, in_dim), W(wv2.data.data(), out_dim, in_dim);
    if (tape.requires_grad(x)) {
      MatMap<T> dX(tape.grad(x).data.data(), batch, in_dim);
      dX.noalias() += dY * W;
    }
    if (tape.requires_grad(w)) {
      MatMap<T> dW(tape.grad(w).data.data(), out_dim, in_dim);
      dW.noalias() += dY.transpose() * X;
    }
    if (tape.requires_grad(bias)) {
      auto& db = tape.grad(bias);
      for (int r = 0; r < batch; ++r) {
        for (int c = 0; c < out_dim; ++c) db[static_cast<size_t>(c)] += dy.at(r, c);
      }
    }
  });
}

namespace detail {

// col[(ci*K + k), t] = x[b, ci, t + (k - (K-1)/2) * dilation], zero outside.
template <typename T>
void im2col(const Tensor<T>& x, int b, int kernel, int dilation, Tensor<T>& col) {
  int c_in = x.dim(1), t_dim = x.dim(2);
  int half = (kernel - 1) / 2;
  for (int ci = 0; ci < c_in; ++ci) {
    for (int k = 0; k < kernel; ++k) {
      T* dst = col.data.data() + (static_cast<size_t>(ci) * kernel + k) * t_dim;
      int shift = (k - half) * dilation;
      int lo = std::max(0, -shift), hi = std::min(t_dim, t_dim - shift);
      for (int t = 0; t < lo; ++t) dst[t] = T(0);
      const T* src = &x.at(b, ci, 0);
      for (int t = lo; t < hi; ++t) dst[t] = src[t + shift];
      for (int t = hi; t < t_dim; ++t) dst[t] = T(0);
    }
  }
}

}  // namespace detail

// Dilated 1-D convolution with same-length zero padding.
// x: [B, C_in, T], w: [C_out, C_in, K] with K odd. y[b,o,t] =
// sum_{i,k} w[o,i,k] * x[b,i,t+(k-(K-1)/2)*dilation].
template <typename T>
Var conv1d_dilated(Tape<T>& tape, Var x, Var w, int dilation) {
  const auto& xv = tape.val(x);
  const auto& wv = tape.val(w);
  ACCENTID_CHECK_ARG(xv.ndim() == 3 && wv.ndim() == 3, "conv1d: bad ranks");
  ACCENTID_CHECK_ARG(wv.dim(2) % 2 == 1, "conv1d: kernel must be odd");
  ACCENTID_CHECK_ARG(wv.dim(1) == xv.dim(1), "conv1d: channel mismatch");
  ACCENTID_CHECK_ARG(dilation >= 1, "conv1d: dilation must be >= 1");
  int batch = xv.dim(0), c_in = xv.dim(1), t_dim = xv.dim(2);
  int c_out = wv.dim(0), kernel = wv.dim(2);

  auto cols = std::make_shared<std::vector<Tensor<T>>>();
  cols->reserve(static_cast<size_t>(batch));
  Tensor<T> out = Tensor<T>::zeros({batch, c_out, t_dim});
  for (int b = 0; b < batch; ++b) {
    Tensor<T> col = Tensor<T>::zeros({c_in * kernel, t_dim});
    detail::im2col(xv, b, kernel, dilation, col);
    ConstMatMap<T> W(wv.data.data(), c_out, c_in * kernel);
    ConstMatMap<T> C(col.data.data(), c_in * kernel, t_dim);
    MatMap<T> Y(&out.at(b, 0, 0), c_out, t_dim);
    Y.noalias() = W * C;
    cols->push_back(std::move(col));
  }
  bool rg = tape.requires_grad(x) || tape.requires_grad(w);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true,
                   [&tape, x, w, dilation, batch, c_in, t_dim, c_out, kernel, cols, result] {
    const auto& dy = tape.grad(result);
    int half = (kernel - 1) / 2;
    for (int b = 0; b < batch; ++b) {
      ConstMatMap<T> dY(&dy.at(b, 0, 0), c_out, t_dim);
      if (tape.requires_grad(w)) {
        MatMap<T> dW(tape.grad(w).data.data(), c_out, c_in * kernel);
        ConstMatMap<T> C((*cols)[static_cast<size_t>(b)].data.data(),
                         c_in * kernel, t_dim);
        dW.noalias() += dY * C.transpose();
      }
      if (tape.requires_grad(x)) {
        const auto& wv2 = tape.val(w);
        ConstMatMap<T> W(wv2.data.data(), c_out, c_in * kernel);
        EigenMat<T> dcol = W.transpose() * dY;  // [C_in*K, T]
        auto& dx = tape.grad(x);
        for (int ci = 0; ci < c_in; ++ci) {
          for (int k = 0; k < kernel; ++k) {
            int shift = (k - half) * dilation;
            const T* src = dcol.data() + (static_cast<size_t>(ci) * kernel + k) * t_dim;
            T* dst = &dx.at(b, ci, 0);
            int lo = std::max(0, -shift), hi = std::min(t_dim, t_dim - shift);
            for (int t = lo; t < hi; ++t) dst[t + shift] += src[t];
          }
        }
      }
    }
  });
}

// Statistics pooling: concat(mean_t, std_t) over [B, C, T] -> [B, 2C].
// std uses population variance with a 1e-10 floor inside the sqrt.
template <typename T>
Var stats_pool(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.ndim() == 3, "stats_pool expects [B, C, T]");
  int batch = xv.dim(0), channels = xv.dim(1), t_dim = xv.dim(2);
  ACCENTID_CHECK_ARG(t_dim >= 2, "stats_pool needs at least two frames");
  constexpr double kVarFloor = 1e-10;
  Tensor<T> out = Tensor<T>::zeros({batch, 2 * channels});
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < channels; ++c) {
      double sum = 0.0, sq = 0.0;
      const T* p = &xv.at(b, c, 0);
      for (int t = 0; t < t_dim; ++t) {
        sum += static_cast<double>(p[t]);
        sq += static_cast<double>(p[t]) * p[t];
      }
      double mean = sum / t_dim;
      double var = sq / t_dim - mean * mean;
      if (var < 0.0) var = 0.0;
      out.at(b, c) = static_cast<T>(mean);
      out.at(b, channels + c) = static_cast<T>(std::sqrt(var + kVarFloor));
    }
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, batch, channels, t_dim, result] {
    const auto& dy = tape.grad(result);
    const auto& yv = tape.val(result);
    const auto& xv2 = tape.val(x);
    auto& dx = tape.grad(x);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < channels; ++c) {
        T mean = yv.at(b, c);
        T stddev = yv.at(b, channels + c);
        T dmean = dy.at(b, c);
        T dstd = dy.at(b, channels + c);
        // dvar = dstd / (2*std); d x_t = dmean/T + dvar * 2(x_t - mean)/T.
        T dvar = dstd / (T(2) * stddev);
        const T* p = &xv2.at(b, c, 0);
        T* d = &dx.at(b, c, 0);
        T inv_t = T(1) / static_cast<T>(t_dim);
        for (int t = 0; t < t_dim; ++t) {
          d[t] += dmean * inv_t + dvar * T(2) * (p[t] - mean) * inv_t;
        }
      }
    }
  });
}

// Per-channel gating: y[b,c,t] = x[b,c,t] * g[b,c].
template <typename T>
Var scale_channels(Tape<T>& tape, Var x, Var gate) {
  const auto& xv = tape.val(x);
  const auto& gv = tape.val(gate);
  ACCENTID_CHECK_ARG(xv.ndim() == 3 && gv.ndim() == 2 && gv.dim(0) == xv.dim(0) &&
                         gv.dim(1) == xv.dim(1),
                     "scale_channels: shape mismatch");
  int batch = xv.dim(0), channels = xv.dim(1), t_dim = xv.dim(2);
  Tensor<T> out = xv;
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < channels; ++c) {
      T g = gv.at(b, c);
      T* p = &out.at(b, c, 0);
      for (int t = 0; t < t_dim; ++t) p[t] *= g;
    }
  }
  bool rg = tape.requires_grad(x) || tape.requires_grad(gate);
  if (!rg) return tape.make(std::move(out), false, nullptr);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), true, [&tape, x, gate, batch, channels, t_dim, result] {
    const auto& dy = tape.grad(result);
    const auto& xv2 = tape.val(x);
    const auto& gv2 = tape.val(gate);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < channels; ++c) {
        const T* dyp = &dy.at(b, c, 0);
        if (tape.requires_grad(x)) {
          T g = gv2.at(b, c);
          T* dxp = &tape.grad(x).at(b, c, 0);
          for (int t = 0; t < t_dim; ++t) dxp[t] += dyp[t] * g;
        }
        if (tape.requires_grad(gate)) {
          const T* xp = &xv2.at(b, c, 0);
          double acc = 0.0;
          for (int t = 0; t < t_dim; ++t) acc += static_cast<double>(dyp[t]) * xp[t];
          tape.grad(gate).at(b, c) += static_cast<T>(acc);
        }
      }
    }
  });
}

// Mean over time: [B, C, T] -> [B, C].
template <typename T>
Var mean_time(Tape<T>& tape, Var x) {
  const auto& xv = tape.val(x);
  ACCENTID_CHECK_ARG(xv.ndim() == 3, "mean_time expects [B, C, T]");
  int batch = xv.dim(0), channels = xv.dim(1), t_dim = xv.dim(2);
  Tensor<T> out = Tensor<T>::zeros({batch, channels});
  for (int b = 0; b < batch; ++b) {
    for (int c = 0; c < channels; ++c) {
      double acc = 0.0;
      const T* p = &xv.at(b, c, 0);
      for (int t = 0; t < t_dim; ++t) acc += static_cast<double>(p[t]);
      out.at(b, c) = static_cast<T>(acc / t_dim);
    }
  }
  bool rg = tape.requires_grad(x);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, x, batch, channels, t_dim, result] {
    const auto& dy = tape.grad(result);
    auto& dx = tape.grad(x);
    T inv_t = T(1) / static_cast<T>(t_dim);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < channels; ++c) {
        T g = dy.at(b, c) * inv_t;
        T* d = &dx.at(b, c, 0);
        for (int t = 0; t < t_dim; ++t) d[t] += g;
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

// Mean softmax cross-entropy over rows of logits [B, C].
template <typename T>
Var softmax_cross_entropy(Tape<T>& tape, Var logits, const std::vector<int>& labels) {
  const auto& lv = tape.val(logits);
  ACCENTID_CHECK_ARG(lv.ndim() == 2, "cross_entropy expects [B, C] logits");
  int batch = lv.dim(0), classes = lv.dim(1);
  ACCENTID_CHECK_ARG(static_cast<int>(labels.size()) == batch, "label count mismatch");
  for (int y : labels) {
    ACCENTID_CHECK_ARG(y >= 0 && y < classes, "label out of range");
  }
  auto probs = std::make_shared<Tensor<T>>(Tensor<T>::zeros({batch, classes}));
  double loss = 0.0;
  for (int b = 0; b < batch; ++b) {
    const T* p = &lv.at(b, 0);
    T mx = *std::max_element(p, p + classes);
    double sum = 0.0;
    for (int c = 0; c < classes; ++c) sum += std::exp(static_cast<double>(p[c] - mx));
    double lse = static_cast<double>(mx) + std::log(sum);
    for (int c = 0; c < classes; ++c) {
      probs->at(b, c) = static_cast<T>(std::exp(static_cast<double>(p[c]) - lse));
    }
    loss -= static_cast<double>(p[labels[static_cast<size_t>(b)]]) - lse;
  }
  Tensor<T> out({1}, {static_cast<T>(loss / batch)});
  bool rg = tape.requires_grad(logits);
  auto labels_copy = std::make_shared<std::vector<int>>(labels);
  Var result{static_cast<int>(tape.size())};
  return tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, logits, probs, labels_copy, batch, classes, result] {
    T g = tape.grad(result)[0] / static_cast<T>(batch);
    auto& dx = tape.grad(logits);
    for (int b = 0; b < batch; ++b) {
      for (int c = 0; c < classes; ++c) {
        T delta = (c == (*labels_copy)[static_cast<size_t>(b)]) ? T(1) : T(0);
        dx.at(b, c) += g * (probs->at(b, c) - delta);
      }
    }
  });
}

struct AamResult {
  Var loss;
  // s * cos(theta) logits without the margin, for accuracy bookkeeping.
  std::vector<float> cos_logits;
  int batch = 0;
  int classes = 0;
};

// Additive angular margin softmax loss. Embeddings and class weights are
// L2-normalized internally; the target logit uses s*cos(theta+m) while
// theta <= pi - m and the linear fallback s*(cos(theta) - m*sin(m)) past it.
template <typename T>
AamResult aam_softmax_loss(Tape<T>& tape, Var emb, Var weights,
                           const std::vector<int>& labels, double s, double m) {
  const auto& ev = tape.val(emb);
  const auto& wv = tape.val(weights);
  ACCENTID_CHECK_ARG(ev.ndim() == 2 && wv.ndim() == 2 && ev.dim(1) == wv.dim(1),
                     "aam: shape mismatch");
  ACCENTID_CHECK_ARG(s > 0.0, "aam: scale must be positive");
  ACCENTID_CHECK_ARG(m >= 0.0 && m < M_PI / 2, "aam: margin outside [0, pi/2)");
  int batch = ev.dim(0), classes = wv.dim(0), dim = ev.dim(1);
  ACCENTID_CHECK_ARG(static_cast<int>(labels.size()) == batch, "label count mismatch");
  for (int y : labels) {
    ACCENTID_CHECK_ARG(y >= 0 && y < classes, "label out of range");
  }

  const double cos_m = std::cos(m), sin_m = std::sin(m);
  const double flip_threshold = std::cos(M_PI - m);
  constexpr double kClamp = 1e-7;

  auto enorm = std::make_shared<std::vector<double>>(batch);
  auto wnorm = std::make_shared<std::vector<double>>(classes);
  auto cosine = std::make_shared<Tensor<double>>(Tensor<double>::zeros({batch, classes}));
  auto probs = std::make_shared<Tensor<double>>(Tensor<double>::zeros({batch, classes}));
  auto target_scale = std::make_shared<std::vector<double>>(batch);  // dpsi/dcos

  for (int b = 0; b < batch; ++b) {
    double n = 0.0;
    for (int d = 0; d < dim; ++d) n += static_cast<double>(ev.at(b, d)) * ev.at(b, d);
    (*enorm)[static_cast<size_t>(b)] = std::sqrt(n) + 1e-12;
  }
  for (int c = 0; c < classes; ++c) {
    double n = 0.0;
    for (int d = 0; d < dim; ++d) n += static_cast<double>(wv.at(c, d)) * wv.at(c, d);
    (*wnorm)[static_cast<size_t>(c)] = std::sqrt(n) + 1e-12;
  }

  AamResult res;
  res.batch = batch;
  res.classes = classes;
  res.cos_logits.resize(static_cast<size_t>(batch) * classes);
  double loss = 0.0;
  std::vector<double> logits(static_cast<size_t>(classes));
  for (int b = 0; b < batch; ++b) {
    int y = labels[static_cast<size_t>(b)];
    for (int c = 0; c < classes; ++c) {
      double dot = 0.0;
      for (int d = 0; d < dim; ++d) {
        dot += static_cast<double>(ev.at(b, d)) * wv.at(c, d);
      }
      double cos_t = dot / ((*enorm)[static_cast<size_t>(b)] * (*wnorm)[static_cast<size_t>(c)]);
      cos_t = std::clamp(cos_t, -1.0 + kClamp, 1.0 - kClamp);
      cosine->at(b, c) = cos_t;
      res.cos_logits[static_cast<size_t>(b) * classes + c] =
          static_cast<float>(s * cos_t);
      logits[static_cast<size_t>(c)] = s * cos_t;
    }
    double cos_y = cosine->at(b, y);
    double psi, dpsi;
    if (cos_y > flip_threshold) {
      double sin_y = std::sqrt(1.0 - cos_y * cos_y);
      psi = cos_y * cos_m - sin_y * sin_m;
      dpsi = cos_m + sin_m * cos_y / sin_y;
    } else {
      psi = cos_y - m * sin_m;
      dpsi = 1.0;
    }
    (*target_scale)[static_cast<size_t>(b)] = dpsi;
    logits[static_cast<size_t>(y)] = s * psi;

    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - mx);
    double lse = mx + std::log(sum);
    for (int c = 0; c < classes; ++c) {
      probs->at(b, c) = std::exp(logits[static_cast<size_t>(c)] - lse);
    }
    loss -= logits[static_cast<size_t>(y)] - lse;
  }
  Tensor<T> out({1}, {static_cast<T>(loss / batch)});

  bool rg = tape.requires_grad(emb) || tape.requires_grad(weights);
  auto labels_copy = std::make_shared<std::vector<int>>(labels);
  Var loss_var{static_cast<int>(tape.size())};
  res.loss = tape.make(std::move(out), rg, !rg ? std::function<void()>() : [&tape, emb, weights, labels_copy,
                       enorm, wnorm, cosine, probs, target_scale, s, batch,
                       classes, dim, loss_var] {
    T gscale = tape.grad(loss_var)[0];
    const auto& ev2 = tape.val(emb);
    const auto& wv2 = tape.val(weights);
    for (int b = 0; b < batch; ++b) {
      int y = (*labels_copy)[static_cast<size_t>(b)];
      double en = (*enorm)[static_cast<size_t>(b)];
      for (int c = 0; c < classes; ++c) {
        double dlogit = (probs->at(b, c) - (c == y ? 1.0 : 0.0)) / batch *
                        static_cast<double>(gscale);
        if (dlogit == 0.0) continue;
        double dcos = dlogit * s * (c == y ? (*target_scale)[static_cast<size_t>(b)] : 1.0);
        double wn = (*wnorm)[static_cast<size_t>(c)];
        double cos_t = cosine->at(b, c);
        // d cos / d e = (w_hat - cos * e_hat) / |e|; symmetric for w.
        if (tape.requires_grad(emb)) {
          auto& de = tape.grad(emb);
          for (int d = 0; d < dim; ++d) {
            double w_hat = wv2.at(c, d) / wn;
            double e_hat = ev2.at(b, d) / en;
            de.at(b, d) += static_cast<T>(dcos * (w_hat - cos_t * e_hat) / en);
          }
        }
        if (tape.requires_grad(weights)) {
          auto& dw = tape.grad(weights);
          for (int d = 0; d < dim; ++d) {
            double w_hat = wv2.at(c, d) / wn;
            double e_hat = ev2.at(b, d) / en;
            dw.at(c, d) += static_cast<T>(dcos * (e_hat - cos_t * w_hat) / wn);
          }
        }
      }
    }
  });
  return res;
}

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_OPS_HPP_
