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

#ifndef ACCENTID_AUTOGRAD_TENSOR_HPP_
#define ACCENTID_AUTOGRAD_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "accentid/common/error.hpp"
#include "accentid/common/rng.hpp"

namespace accentid::ag {

// Dense row-major tensor of rank <= 3. f32 at runtime, f64 in the gradient
// checker.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;
  Tensor(std::vector<int> s, std::vector<T> d) : shape(std::move(s)), data(std::move(d)) {
    ACCENTID_CHECK_ARG(data.size() == numel_of(shape), "tensor size mismatch");
  }

  static size_t numel_of(const std::vector<int>& shape) {
    size_t n = 1;
    for (int d : shape) {
      ACCENTID_CHECK_ARG(d >= 0, "negative dimension");
      n *= static_cast<size_t>(d);
    }
    return n;
  }

  static Tensor zeros(std::vector<int> shape) {
    size_t n = numel_of(shape);
    return Tensor(std::move(shape), std::vector<T>(n, T(0)));
  }

  static Tensor full(std::vector<int> shape, T v) {
    size_t n = numel_of(shape);
    return Tensor(std::move(shape), std::vector<T>(n, v));
  }

  static Tensor randn(std::vector<int> shape, Rng& rng, double stddev = 1.0) {
    size_t n = numel_of(shape);
    std::vector<T> d(n);
    for (auto& v : d) v = static_cast<T>(rng.normal(0.0, stddev));
    return Tensor(std::move(shape), std::move(d));
  }

  size_t numel() const { return data.size(); }
  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  T& operator[](size_t i) { return data[i]; }
  const T& operator[](size_t i) const { return data[i]; }

  // 2D / 3D element access.
  T& at(int i, int j) { return data[static_cast<size_t>(i) * dim(1) + j]; }
  const T& at(int i, int j) const { return data[static_cast<size_t>(i) * dim(1) + j]; }
  T& at(int b, int i, int j) {
    return data[(static_cast<size_t>(b) * dim(1) + i) * dim(2) + j];
  }
  const T& at(int b, int i, int j) const {
    return data[(static_cast<size_t>(b) * dim(1) + i) * dim(2) + j];
  }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> d(data.size());
    for (size_t i = 0; i < data.size(); ++i) d[i] = static_cast<U>(data[i]);
    return Tensor<U>(shape, std::move(d));
  }

  bool all_finite() const {
    for (T v : data) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }
};

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_TENSOR_HPP_
