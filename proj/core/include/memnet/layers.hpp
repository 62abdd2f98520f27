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

#ifndef MEMNET_LAYERS_HPP_
#define MEMNET_LAYERS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "memnet/ops.hpp"
#include "memnet/rng.hpp"
#include "memnet/tensor.hpp"

namespace memnet {

// What a parameter is, which decides e.g. whether weight decay applies.
enum class ParamKind : std::uint32_t {
  kConvWeight = 0,
  kConvBias = 1,
  kBnGamma = 2,
  kBnBeta = 3,
  kEnsemble = 4,
};

// A learnable tensor. The gradient lives in value's grad slot; the momentum
// buffer has the same element count and starts at zero.
template <typename T>
struct Parameter {
  std::string name;
  ParamKind kind = ParamKind::kConvWeight;
  Tensor<T> value;
  std::vector<T> momentum;

  Parameter() = default;
  Parameter(std::string name, ParamKind kind, Tensor<T> v)
      : name(std::move(name)), kind(kind), value(std::move(v)),
        momentum(value.numel(), T(0)) {
    value.set_requires_grad(true);
  }

  std::span<T> grad() { return value.grad(); }
};

// He/MSRA initialisation: N(0, 2 / fan_in).
template <typename T>
Tensor<T> msra_init(int fan_in, Shape shape, Rng& rng);

template <typename T>
struct Conv2dLayer {
  Parameter<T> weight;  // [cout, cin, k, k]
  Parameter<T> bias;    // [1, cout, 1, 1], zero-initialised

  // MSRA weights with fan_in = cin * k * k.
  static Conv2dLayer create(const std::string& name, int cin, int cout, int k,
                            Rng& rng);

  int in_channels() const { return weight.value.shape().c; }
  int out_channels() const { return weight.value.shape().n; }
  int kernel() const { return weight.value.shape().h; }

  Tensor<T> operator()(Graph<T>& g, const Tensor<T>& x) const;
};

template <typename T>
struct BatchNormLayer {
  Parameter<T> gamma;  // ones
  Parameter<T> beta;   // zeros
  RunningStats<T> stats;

  static BatchNormLayer create(const std::string& name, int channels);

  int channels() const { return static_cast<int>(gamma.value.numel()); }

  Tensor<T> operator()(Graph<T>& g, const Tensor<T>& x, Mode mode);
};

// tau(x) = relu(bn(x)).
template <typename T>
Tensor<T> bn_relu(Graph<T>& g, const Tensor<T>& x, BatchNormLayer<T>& bn, Mode mode);

// Weights of one pre-activation residual building block; F channels in and
// out.
template <typename T>
struct ResidualBlockParams {
  BatchNormLayer<T> bn1;
  Conv2dLayer<T> conv1;
  BatchNormLayer<T> bn2;
  Conv2dLayer<T> conv2;

  static ResidualBlockParams create(const std::string& prefix, int filters, Rng& rng);
  int filters() const { return conv1.in_channels(); }
};

// conv2(tau(conv1(tau(h)))).
template <typename T>
Tensor<T> residual_function(Graph<T>& g, const Tensor<T>& h,
                            ResidualBlockParams<T>& params, Mode mode);

// residual_function(h) + h.
template <typename T>
Tensor<T> residual_block(Graph<T>& g, const Tensor<T>& h,
                         ResidualBlockParams<T>& params, Mode mode);

}  // namespace memnet

#endif  // MEMNET_LAYERS_HPP_
