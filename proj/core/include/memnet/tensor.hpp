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

#ifndef MEMNET_TENSOR_HPP_
#define MEMNET_TENSOR_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "memnet/error.hpp"

namespace memnet {

// NCHW extent of a tensor.
struct Shape {
  int n = 1;
  int c = 1;
  int h = 1;
  int w = 1;

  std::size_t numel() const {
    return static_cast<std::size_t>(n) * c * h * w;
  }
  std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

// Handle to a dense NCHW buffer with an optional gradient slot. Copies of a
// handle alias the same storage; identity (not value) is what the tape uses
// to wire backward rules.
template <typename T>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, bool requires_grad = false);
  Tensor(Shape shape, std::vector<T> values, bool requires_grad = false);

  static Tensor scalar(T value, bool requires_grad = false) {
    return Tensor(Shape{}, std::vector<T>{value}, requires_grad);
  }

  bool defined() const { return storage_ != nullptr; }
  const Shape& shape() const { return storage_->shape; }
  std::size_t numel() const { return storage_->values.size(); }

  std::span<const T> values() const { return storage_->values; }
  // Writable access is for leaves (parameters, inputs); op outputs are
  // treated as immutable once produced.
  std::span<T> mutable_values() { return storage_->values; }
  T item() const;

  bool requires_grad() const { return storage_->requires_grad; }
  void set_requires_grad(bool on) { storage_->requires_grad = on; }

  bool has_grad() const { return !storage_->grad.empty(); }
  // Gradient buffer, allocated (zero-filled) on first access. Writable
  // through a const handle like the rest of the shared storage.
  std::span<T> grad() const;
  void zero_grad() const;

  bool same_as(const Tensor& other) const { return storage_ == other.storage_; }

 private:
  struct Storage {
    Shape shape;
    std::vector<T> values;
    std::vector<T> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> storage_;
};

// Reverse-mode tape. Ops append one record per produced tensor; backward()
// replays the records in reverse, each rule adding into its inputs' grads.
template <typename T>
class Graph {
 public:
  // A graph constructed with record=false never stores anything; ops run
  // forward only. Used for inference.
  explicit Graph(bool record = true) : record_(record) {}

  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  bool recording() const { return record_; }
  std::size_t size() const { return records_.size(); }

  // Whether an op over `inputs` must be taped.
  bool tracks(std::initializer_list<const Tensor<T>*> inputs) const;
  bool tracks(std::span<const Tensor<T>> inputs) const;

  void record(const Tensor<T>& output, std::function<void()> backward);

  // Seeds d(loss)/d(loss) = 1 and runs every record up to the one that
  // produced `loss`. Valid once per recording.
  void backward(Tensor<T>& loss);

 private:
  struct Record {
    Tensor<T> output;
    std::function<void()> backward;
  };
  bool record_;
  bool consumed_ = false;
  std::vector<Record> records_;
};

// Throws kNumeric if any value is NaN or infinite.
template <typename T>
void check_finite(std::span<const T> values, const char* what);

}  // namespace memnet

#endif  // MEMNET_TENSOR_HPP_
