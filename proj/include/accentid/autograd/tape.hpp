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

#ifndef ACCENTID_AUTOGRAD_TAPE_HPP_
#define ACCENTID_AUTOGRAD_TAPE_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "accentid/autograd/tensor.hpp"
#include "accentid/common/error.hpp"

namespace accentid::ag {

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape. Nodes are appended in topological order (an op can only
// read nodes that already exist), so the backward sweep is a single reverse
// pass that visits each node once. A tape is single-threaded; independent
// tapes may run concurrently.
template <typename T>
class Tape {
 public:
  Var leaf(Tensor<T> value, bool requires_grad) {
    nodes_.push_back(Node{std::move(value), Tensor<T>(), nullptr, requires_grad});
    visits_.push_back(0);
    return Var{static_cast<int>(nodes_.size()) - 1};
  }

  // `backward` accumulates into the parents' grads; it runs at most once.
  Var make(Tensor<T> value, bool requires_grad, std::function<void()> backward) {
    nodes_.push_back(
        Node{std::move(value), Tensor<T>(), std::move(backward), requires_grad});
    visits_.push_back(0);
    return Var{static_cast<int>(nodes_.size()) - 1};
  }

  const Tensor<T>& val(Var v) const { return nodes_[check(v)].value; }
  Tensor<T>& val(Var v) { return nodes_[check(v)].value; }

  Tensor<T>& grad(Var v) {
    Node& node = nodes_[check(v)];
    if (node.grad.numel() == 0 && node.value.numel() > 0) {
      node.grad = Tensor<T>::zeros(node.value.shape);
    }
    return node.grad;
  }

  bool requires_grad(Var v) const { return nodes_[check(v)].requires_grad; }

  // Seeds d(root)/d(root) = 1 and sweeps the tape in reverse. The root must
  // be scalar (numel == 1).
  void backward(Var root) {
    size_t r = check(root);
    ACCENTID_CHECK_ARG(nodes_[r].value.numel() == 1,
                       "backward root must be scalar");
    grad(root)[0] = T(1);
    for (size_t i = r + 1; i-- > 0;) {
      Node& node = nodes_[i];
      if (node.backward && node.requires_grad && node.grad.numel() > 0) {
        ++visits_[i];
        node.backward();
      }
    }
  }

  size_t size() const { return nodes_.size(); }

  // Instrumentation for the visit-once invariant.
  const std::vector<int>& visit_counts() const { return visits_; }
  size_t total_visits() const {
    size_t n = 0;
    for (int v : visits_) n += static_cast<size_t>(v);
    return n;
  }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    std::function<void()> backward;
    bool requires_grad = false;
  };

  size_t check(Var v) const {
    ACCENTID_CHECK_ARG(v.id >= 0 && static_cast<size_t>(v.id) < nodes_.size(),
                       "invalid tape variable");
    return static_cast<size_t>(v.id);
  }

  std::vector<Node> nodes_;
  std::vector<int> visits_;
};

}  // namespace accentid::ag

#endif  // ACCENTID_AUTOGRAD_TAPE_HPP_
