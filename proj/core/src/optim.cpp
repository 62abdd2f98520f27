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

#include "memnet/optim.hpp"

#include <cmath>

namespace memnet {

void TrainConfig::validate() const {
  require(base_lr > 0, ErrorKind::kConfig, "train.lr must be positive");
  require(momentum >= 0 && momentum < 1, ErrorKind::kConfig,
          "train.momentum must lie in [0, 1)");
  require(batch_size >= 1, ErrorKind::kConfig, "train.batch_size must be >= 1");
  require(lr_drop_every >= 1, ErrorKind::kConfig, "train.lr_drop_every must be >= 1");
  require(lr_drop_factor > 0, ErrorKind::kConfig, "train.lr_drop_factor must be positive");
  require(weight_decay >= 0, ErrorKind::kConfig, "train.weight_decay must be >= 0");
  require(epochs >= 0 && max_iterations >= 0, ErrorKind::kConfig,
          "train.epochs and train.max_iterations must be >= 0");
  if (clip_norm)
    require(*clip_norm > 0, ErrorKind::kConfig, "train.clip_norm must be positive");
}

double lr_at(int epoch, const TrainConfig& config) {
  require(epoch >= 0, ErrorKind::kValue, "lr_at: negative epoch");
  const int drops = epoch / config.lr_drop_every;
  return config.base_lr / std::pow(config.lr_drop_factor, drops);
}

template <typename T>
void sgd_step(std::span<Parameter<T>* const> params, double lr,
              const TrainConfig& config) {
  for (const Parameter<T>* p : params) {
    if (!p->value.has_grad()) continue;
    for (T g : p->value.grad())
      if (!std::isfinite(g))
        fail(ErrorKind::kNumeric, "non-finite gradient in " + p->name);
  }
  const T mom = static_cast<T>(config.momentum);
  const T rate = static_cast<T>(lr);
  for (Parameter<T>* p : params) {
    if (!p->value.has_grad()) continue;
    const T decay = p->kind == ParamKind::kConvWeight
                        ? static_cast<T>(config.weight_decay)
                        : T(0);
    auto w = p->value.mutable_values();
    auto g = p->value.grad();
    auto& v = p->momentum;
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = mom * v[i] - rate * (g[i] + decay * w[i]);
      w[i] += v[i];
    }
    p->value.zero_grad();
  }
}

template <typename T>
double clip_gradients(std::span<Parameter<T>* const> params, double max_norm) {
  require(max_norm > 0, ErrorKind::kValue, "clip_gradients: max_norm must be positive");
  double sq = 0;
  for (Parameter<T>* p : params) {
    if (!p->value.has_grad()) continue;
    for (T g : p->value.grad()) sq += static_cast<double>(g) * g;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const T factor = static_cast<T>(max_norm / norm);
    for (Parameter<T>* p : params) {
      if (!p->value.has_grad()) continue;
      for (T& g : p->value.grad()) g *= factor;
    }
  }
  return norm;
}

template void sgd_step<float>(std::span<Parameter<float>* const>, double, const TrainConfig&);
template void sgd_step<double>(std::span<Parameter<double>* const>, double, const TrainConfig&);
template double clip_gradients<float>(std::span<Parameter<float>* const>, double);
template double clip_gradients<double>(std::span<Parameter<double>* const>, double);

}  // namespace memnet
