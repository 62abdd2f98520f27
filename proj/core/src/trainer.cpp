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

#include "memnet/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "memnet/rng.hpp"

namespace memnet {

std::vector<std::size_t> epoch_order(std::size_t count, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, Stream::kShuffle, static_cast<std::uint64_t>(epoch)));
  for (std::size_t i = count; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

double train_step(MemNetParams<float>& net, const Tensor<float>& input,
                  const Tensor<float>& target, double lr, const TrainConfig& config) {
  Graph<float> g;
  const int batch = input.shape().n;
  Tensor<float> loss;
  if (net.config.multi_supervised) {
    MultiOutput<float> out = memnet_multi_forward(g, input, net, Mode::kTrain);
    loss = multi_loss<float>(g, out.intermediates, out.final, target,
                             net.config.loss_alpha(), batch);
  } else {
    Tensor<float> y = memnet_forward(g, input, net, Mode::kTrain);
    loss = mse_half(g, y, target, 1.0 / (2.0 * batch));
  }
  const double value = loss.item();
  g.backward(loss);
  auto params = net.parameters();
  if (config.clip_norm) clip_gradients<float>(params, *config.clip_norm);
  sgd_step<float>(params, lr, config);
  return value;
}

int train(MemNetParams<float>& net, const PatchSet& data, const TrainConfig& config,
          int start_epoch, const TrainHooks& hooks) {
  config.validate();
  require(data.size() > 0, ErrorKind::kValue, "empty training set");
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);
  const std::int64_t per_epoch = static_cast<std::int64_t>((data.size() + batch - 1) / batch);
  int epoch = start_epoch;
  for (; epoch < config.epochs; ++epoch) {
    const double lr = lr_at(epoch, config);
    const auto order = epoch_order(data.size(), config.seed, epoch);
    for (std::int64_t it = 0; it < per_epoch; ++it) {
      const std::int64_t iteration = epoch * per_epoch + it;
      if (config.max_iterations > 0 && iteration >= config.max_iterations) return epoch;
      const std::size_t begin = static_cast<std::size_t>(it) * batch;
      const std::size_t end = std::min(begin + batch, data.size());
      const std::span<const std::size_t> idx(order.data() + begin, end - begin);
      auto [input, target] = make_batch<float>(data, idx);
      double loss = 0;
      try {
        loss = train_step(net, input, target, lr, config);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNumeric) throw;
        fail(ErrorKind::kNumeric, "iteration " + std::to_string(iteration) + " (epoch " +
                                      std::to_string(epoch) + "): " + e.what());
      }
      if (hooks.on_iteration) hooks.on_iteration(LossRecord{iteration, epoch, lr, loss});
    }
    if (hooks.on_epoch) hooks.on_epoch(epoch + 1, net);
  }
  return epoch;
}

namespace {

Tensor<float> to_tensor(const GrayImage& img) {
  return Tensor<float>(Shape{1, 1, img.height, img.width}, img.pixels);
}

GrayImage to_image(const Tensor<float>& t) {
  GrayImage img(t.shape().h, t.shape().w,
                std::vector<float>(t.values().begin(), t.values().end()));
  img.clamp();
  return img;
}

}  // namespace

GrayImage restore(MemNetParams<float>& net, const GrayImage& img) {
  Graph<float> g(false);
  if (net.config.multi_supervised)
    return to_image(memnet_multi_forward(g, to_tensor(img), net, Mode::kEval).final);
  return to_image(memnet_forward(g, to_tensor(img), net, Mode::kEval));
}

std::vector<GrayImage> restore_all(MemNetParams<float>& net, const GrayImage& img) {
  require(net.config.multi_supervised, ErrorKind::kConfig,
          "intermediate predictions need a multi-supervised network");
  Graph<float> g(false);
  MultiOutput<float> out = memnet_multi_forward(g, to_tensor(img), net, Mode::kEval);
  std::vector<GrayImage> images{to_image(out.final)};
  for (const Tensor<float>& y : out.intermediates) images.push_back(to_image(y));
  return images;
}

}  // namespace memnet
