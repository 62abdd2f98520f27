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

#ifndef MEMNET_OPTIM_HPP_
#define MEMNET_OPTIM_HPP_

#include <cstdint>
#include <optional>
#include <span>

#include "memnet/layers.hpp"

namespace memnet {

struct TrainConfig {
  double base_lr = 0.1;
  int lr_drop_every = 20;  // epochs
  double lr_drop_factor = 10.0;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  int batch_size = 64;
  std::optional<double> clip_norm;  // unset: no clipping
  int epochs = 60;
  std::int64_t max_iterations = 0;  // 0: no limit
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

// base_lr / drop_factor^floor(epoch / drop_every)
double lr_at(int epoch, const TrainConfig& config);

// Heavy-ball update, then zeroes the gradients:
//   v <- momentum * v - lr * (g + weight_decay * w)
//   w <- w + v
// Weight decay applies to conv weights only. A non-finite gradient aborts
// before any parameter is touched.
template <typename T>
void sgd_step(std::span<Parameter<T>* const> params, double lr,
              const TrainConfig& config);

// Global L2 norm over all gradients; when it exceeds max_norm every gradient
// is scaled by max_norm / norm. Returns the norm before scaling.
template <typename T>
double clip_gradients(std::span<Parameter<T>* const> params, double max_norm);

}  // namespace memnet

#endif  // MEMNET_OPTIM_HPP_
