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

#ifndef MEMNET_TRAINER_HPP_
#define MEMNET_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "memnet/dataset.hpp"
#include "memnet/model.hpp"
#include "memnet/optim.hpp"

namespace memnet {

struct LossRecord {
  std::int64_t iteration = 0;  // 0-based, global across epochs
  int epoch = 0;
  double lr = 0;
  double loss = 0;
};

struct TrainHooks {
  std::function<void(const LossRecord&)> on_iteration;
  // Called after each full epoch with the number of completed epochs.
  std::function<void(int, MemNetParams<float>&)> on_epoch;
};

// Patch order of an epoch: a Fisher-Yates shuffle drawn from
// Rng(derive_seed(seed, kShuffle, epoch)).
std::vector<std::size_t> epoch_order(std::size_t count, std::uint64_t seed, int epoch);

// One SGD iteration on a batch (train-mode BN). Returns the loss before the
// update: mse_half(y, target, 1/(2N)) for the basic network, multi_loss for
// the multi-supervised one.
double train_step(MemNetParams<float>& net, const Tensor<float>& input,
                  const Tensor<float>& target, double lr, const TrainConfig& config);

// Runs epochs [start_epoch, config.epochs), each over ceil(size / batch)
// batches (the last one may be short), stopping early once
// config.max_iterations iterations have run (counted from epoch 0).
// Returns the number of completed epochs.
int train(MemNetParams<float>& net, const PatchSet& data, const TrainConfig& config,
          int start_epoch, const TrainHooks& hooks = {});

// Eval-mode inference on a whole image (any size).
GrayImage restore(MemNetParams<float>& net, const GrayImage& img);

// Multi-supervised inference: final image followed by y_1 .. y_M.
std::vector<GrayImage> restore_all(MemNetParams<float>& net, const GrayImage& img);

}  // namespace memnet

#endif  // MEMNET_TRAINER_HPP_
