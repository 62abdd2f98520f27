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

#include "memnet/layers.hpp"

#include <cmath>
#include <string>

namespace memnet {

template <typename T>
Tensor<T> msra_init(int fan_in, Shape shape, Rng& rng) {
  require(fan_in > 0, ErrorKind::kValue, "msra_init: fan_in must be positive");
  const double stddev = std::sqrt(2.0 / fan_in);
  Tensor<T> t(shape);
  for (T& v : t.mutable_values()) v = static_cast<T>(stddev * rng.normal());
  return t;
}

template <typename T>
Conv2dLayer<T> Conv2dLayer<T>::create(const std::string& name, int cin, int cout,
                                      int k, Rng& rng) {
  Conv2dLayer layer;
  layer.weight = Parameter<T>(name + ".weight", ParamKind::kConvWeight,
                              msra_init<T>(cin * k * k, Shape{cout, cin, k, k}, rng));
  layer.bias = Parameter<T>(name + ".bias", ParamKind::kConvBias,
                            Tensor<T>(Shape{1, cout, 1, 1}));
  return layer;
}

template <typename T>
Tensor<T> Conv2dLayer<T>::operator()(Graph<T>& g, const Tensor<T>& x) const {
  return conv2d(g, x, weight.value, &bias.value, (kernel() - 1) / 2);
}

template <typename T>
BatchNormLayer<T> BatchNormLayer<T>::create(const std::string& name, int channels) {
  BatchNormLayer layer;
  const Shape s{1, channels, 1, 1};
  layer.gamma = Parameter<T>(name + ".gamma", ParamKind::kBnGamma,
                             Tensor<T>(s, std::vector<T>(channels, T(1))));
  layer.beta = Parameter<T>(name + ".beta", ParamKind::kBnBeta, Tensor<T>(s));
  layer.stats = RunningStats<T>(channels);
  return layer;
}

template <typename T>
Tensor<T> BatchNormLayer<T>::operator()(Graph<T>& g, const Tensor<T>& x, Mode mode) {
  return batchnorm(g, x, gamma.value, beta.value, stats, mode);
}

template <typename T>
Tensor<T> bn_relu(Graph<T>& g, const Tensor<T>& x, BatchNormLayer<T>& bn, Mode mode) {
  return relu(g, bn(g, x, mode));
}

template <typename T>
ResidualBlockParams<T> ResidualBlockParams<T>::create(const std::string& prefix,
                                                      int filters, Rng& rng) {
  ResidualBlockParams p;
  p.bn1 = BatchNormLayer<T>::create(prefix + ".bn1", filters);
  p.conv1 = Conv2dLayer<T>::create(prefix + ".conv1", filters, filters, 3, rng);
  p.bn2 = BatchNormLayer<T>::create(prefix + ".bn2", filters);
  p.conv2 = Conv2dLayer<T>::create(prefix + ".conv2", filters, filters, 3, rng);
  return p;
}

template <typename T>
Tensor<T> residual_function(Graph<T>& g, const Tensor<T>& h,
                            ResidualBlockParams<T>& params, Mode mode) {
  require(h.shape().c == params.filters(), ErrorKind::kShape,
          "residual block expects " + std::to_string(params.filters()) +
              " channels, got " + std::to_string(h.shape().c));
  Tensor<T> t = bn_relu(g, h, params.bn1, mode);
  t = params.conv1(g, t);
  t = bn_relu(g, t, params.bn2, mode);
  return params.conv2(g, t);
}

template <typename T>
Tensor<T> residual_block(Graph<T>& g, const Tensor<T>& h,
                         ResidualBlockParams<T>& params, Mode mode) {
  return add(g, residual_function(g, h, params, mode), h);
}

#define MEMNET_INSTANTIATE_LAYERS(T)                                              \
  template Tensor<T> msra_init<T>(int, Shape, Rng&);                              \
  template struct Conv2dLayer<T>;                                                 \
  template struct BatchNormLayer<T>;                                              \
  template struct ResidualBlockParams<T>;                                         \
  template Tensor<T> bn_relu<T>(Graph<T>&, const Tensor<T>&, BatchNormLayer<T>&,  \
                                Mode);                                            \
  template Tensor<T> residual_function<T>(Graph<T>&, const Tensor<T>&,            \
                                          ResidualBlockParams<T>&, Mode);         \
  template Tensor<T> residual_block<T>(Graph<T>&, const Tensor<T>&,               \
                                       ResidualBlockParams<T>&, Mode);

MEMNET_INSTANTIATE_LAYERS(float)
MEMNET_INSTANTIATE_LAYERS(double)

#undef MEMNET_INSTANTIATE_LAYERS

}  // namespace memnet
