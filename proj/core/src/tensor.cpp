// Copyright 2026 The MemNet Authors.
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

#include "memnet/tensor.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "memnet/rng.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace memnet {
namespace {

#if defined(__GLIBC__)
// Activation and gradient buffers are a few MB and are freed every step.
// Serving them from the heap instead of fresh mmaps avoids re-faulting the
// pages on each iteration.
const bool kHeapTuned = [] {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  return true;
}();
#endif

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kValue: return "value";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kGraph: return "graph";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::string Shape::str() const {
  std::ostringstream os;
  os << '[' << n << ',' << c << ',' << h << ',' << w << ']';
  return os.str();
}

template <typename T>
Tensor<T>::Tensor(Shape shape, bool requires_grad)
    : storage_(std::make_shared<Storage>()) {
  require(shape.n > 0 && shape.c > 0 && shape.h > 0 && shape.w > 0,
          ErrorKind::kShape, "tensor extents must be positive, got " + shape.str());
  storage_->shape = shape;
  storage_->values.assign(shape.numel(), T(0));
  storage_->requires_grad = requires_grad;
}

template <typename T>
Tensor<T>::Tensor(Shape shape, std::vector<T> values, bool requires_grad)
    : storage_(std::make_shared<Storage>()) {
  require(shape.n > 0 && shape.c > 0 && shape.h > 0 && shape.w > 0,
          ErrorKind::kShape, "tensor extents must be positive, got " + shape.str());
  require(values.size() == shape.numel(), ErrorKind::kShape,
          "value count " + std::to_string(values.size()) +
              " does not match shape " + shape.str());
  storage_->shape = shape;
  storage_->values = std::move(values);
  storage_->requires_grad = requires_grad;
}

template <typename T>
T Tensor<T>::item() const {
  require(numel() == 1, ErrorKind::kShape,
          "item() on non-scalar tensor " + shape().str());
  return storage_->values[0];
}

template <typename T>
std::span<T> Tensor<T>::grad() const {
  if (storage_->grad.empty()) storage_->grad.assign(numel(), T(0));
  return storage_->grad;
}

template <typename T>
void Tensor<T>::zero_grad() const {
  if (!storage_->grad.empty())
    std::fill(storage_->grad.begin(), storage_->grad.end(), T(0));
}

template <typename T>
bool Graph<T>::tracks(std::initializer_list<const Tensor<T>*> inputs) const {
  if (!record_) return false;
  for (const Tensor<T>* t : inputs)
    if (t != nullptr && t->defined() && t->requires_grad()) return true;
  return false;
}

template <typename T>
bool Graph<T>::tracks(std::span<const Tensor<T>> inputs) const {
  if (!record_) return false;
  for (const Tensor<T>& t : inputs)
    if (t.requires_grad()) return true;
  return false;
}

template <typename T>
void Graph<T>::record(const Tensor<T>& output, std::function<void()> backward) {
  require(!consumed_, ErrorKind::kGraph,
          "cannot record onto a graph whose backward pass already ran");
  records_.push_back(Record{output, std::move(backward)});
}

template <typename T>
void Graph<T>::backward(Tensor<T>& loss) {
  require(!consumed_, ErrorKind::kGraph,
          "backward called twice on the same recording");
  require(loss.defined() && loss.numel() == 1, ErrorKind::kGraph,
          "backward expects a scalar loss");
  std::size_t end = records_.size();
  while (end > 0 && !records_[end - 1].output.same_as(loss)) --end;
  require(end > 0, ErrorKind::kGraph,
          "loss was not produced by this graph (detached)");
  consumed_ = true;
  loss.grad()[0] += T(1);
  for (std::size_t i = end; i-- > 0;) {
    Record& r = records_[i];
    if (r.output.has_grad()) r.backward();
  }
  records_.clear();
}

template <typename T>
void check_finite(std::span<const T> values, const char* what) {
  for (T v : values)
    if (!std::isfinite(v))
      fail(ErrorKind::kNumeric, std::string("non-finite value in ") + what);
}

template class Tensor<float>;
template class Tensor<double>;
template class Graph<float>;
template class Graph<double>;
template void check_finite<float>(std::span<const float>, const char*);
template void check_finite<double>(std::span<const double>, const char*);

}  // namespace memnet
