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

#ifndef MEMNET_OPS_HPP_
#define MEMNET_OPS_HPP_

#include <span>
#include <vector>

#include "memnet/tensor.hpp"

namespace memnet {

enum class Mode { kTrain, kEval };

// Per-channel running statistics of a batch-norm layer.
template <typename T>
struct RunningStats {
  std::vector<T> mean;
  std::vector<T> var;

  explicit RunningStats(int channels = 0)
      : mean(static_cast<std::size_t>(channels), T(0)),
        var(static_cast<std::size_t>(channels), T(1)) {}
};

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.9;

// Stride-1 cross-correlation with zero padding. weight is [Cout, Cin, k, k]
// with k odd; `bias` may be null or hold Cout values. pad = (k - 1) / 2
// keeps the spatial size.
template <typename T>
Tensor<T> conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>* bias, int pad);

// Train mode normalises each channel by its batch mean and biased variance
// and folds the batch statistics into `stats` as
//   running = momentum * running + (1 - momentum) * batch
// (unbiased variance for the running estimate). Eval mode uses `stats`.
template <typename T>
Tensor<T> batchnorm(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& gamma,
                    const Tensor<T>& beta, RunningStats<T>& stats, Mode mode,
                    double eps = kBatchNormEps,
                    double momentum = kBatchNormMomentum);

template <typename T>
Tensor<T> relu(Graph<T>& g, const Tensor<T>& input);

template <typename T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);

// Elementwise product of equal shapes.
template <typename T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T factor);

// Sum of all elements, as a scalar tensor.
template <typename T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a);

template <typename T>
Tensor<T> concat_channels(Graph<T>& g, std::span<const Tensor<T>> parts);

// scale * sum((pred - target)^2). Only `pred` receives a gradient.
template <typename T>
Tensor<T> mse_half(Graph<T>& g, const Tensor<T>& pred, const Tensor<T>& target,
                   double scale);

// sum_m weights[m] * parts[m]; weights has one element per part and is
// differentiable.
template <typename T>
Tensor<T> weighted_sum(Graph<T>& g, std::span<const Tensor<T>> parts,
                       const Tensor<T>& weights);

}  // namespace memnet

#endif  // MEMNET_OPS_HPP_
