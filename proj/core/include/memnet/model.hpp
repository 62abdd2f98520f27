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

#ifndef MEMNET_MODEL_HPP_
#define MEMNET_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memnet/layers.hpp"

namespace memnet {

// Which memories feed the gate unit.
//   kFull:        [H^1 .. H^R, B_0 .. B_{m-1}]
//   kNoLongTerm:  [H^1 .. H^R]
//   kNoShortTerm: [H^R, B_0 .. B_{m-1}]
enum class Variant : std::uint32_t { kFull = 0, kNoLongTerm = 1, kNoShortTerm = 2 };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct MemNetConfig {
  int blocks = 6;      // M
  int recursions = 6;  // R
  int filters = 64;    // F
  Variant variant = Variant::kFull;
  bool multi_supervised = false;
  std::optional<double> alpha;  // unset means 1 / (M + 1)

  double loss_alpha() const { return alpha.value_or(1.0 / (blocks + 1)); }
  void validate() const;
  bool operator==(const MemNetConfig&) const = default;
};

// Convolutional layers: FENet + M * (2R recursion convs + 1 gate) + ReconNet.
int count_layers(const MemNetConfig& config);

// Gate input channels L_m of block m (1-based).
int gate_input_channels(const MemNetConfig& config, int block);

template <typename T>
struct MemoryBlockParams {
  ResidualBlockParams<T> recursion;  // shared by all R recursions
  BatchNormLayer<T> gate_bn;         // over L_m channels
  Conv2dLayer<T> gate;               // 1x1, L_m -> F
};

template <typename T>
struct MemNetParams {
  MemNetConfig config;
  Conv2dLayer<T> fenet;     // 3x3, 1 -> F
  std::vector<MemoryBlockParams<T>> blocks;
  Conv2dLayer<T> reconnet;  // 3x3, F -> 1
  Parameter<T> ensemble;    // [1, 1, 1, M]; multi-supervised only

  // Fresh network; every conv is MSRA-initialised from `seed`, biases and
  // BN betas are zero, gammas one, ensemble weights 1/M.
  static MemNetParams create(const MemNetConfig& config, std::uint64_t seed);

  // Learnable parameters in the canonical (checkpoint) order:
  //   fenet.{weight,bias}
  //   per block: recursion.{bn1.gamma, bn1.beta, conv1.weight, conv1.bias,
  //              bn2.gamma, bn2.beta, conv2.weight, conv2.bias},
  //              gate_bn.{gamma, beta}, gate.{weight, bias}
  //   reconnet.{weight,bias}
  //   ensemble (multi-supervised only)
  std::vector<Parameter<T>*> parameters();
  // Batch-norm layers in the same order (bn1, bn2, gate_bn per block).
  std::vector<BatchNormLayer<T>*> batchnorms();

  // Deep copy, optionally changing precision.
  template <typename U>
  MemNetParams<U> cast() const;
  MemNetParams clone() const { return cast<T>(); }

  void zero_grad();
};

// [H^1 .. H^R] with H^0 = b_prev and H^r = residual_block(H^{r-1}), always
// with the block's single parameter set.
template <typename T>
std::vector<Tensor<T>> recursive_unit(Graph<T>& g, const Tensor<T>& b_prev,
                                      MemoryBlockParams<T>& block, int recursions,
                                      Mode mode);

// gate(tau([short..., long...])): BN + ReLU over the concatenation, then the
// 1x1 convolution down to F channels.
template <typename T>
Tensor<T> gate_unit(Graph<T>& g, std::span<const Tensor<T>> short_mems,
                    std::span<const Tensor<T>> long_mems,
                    MemoryBlockParams<T>& block, Mode mode);

// Block m (1-based). long_mems must be [B_0 .. B_{m-1}], i.e. m tensors,
// whatever the variant; the variant decides what the gate actually sees.
template <typename T>
Tensor<T> memory_block(Graph<T>& g, const Tensor<T>& b_prev,
                       std::span<const Tensor<T>> long_mems,
                       MemoryBlockParams<T>& block, const MemNetConfig& config,
                       int m, Mode mode);

// y = x + ReconNet(B_M).
template <typename T>
Tensor<T> memnet_forward(Graph<T>& g, const Tensor<T>& x, MemNetParams<T>& net,
                         Mode mode);

template <typename T>
struct MultiOutput {
  Tensor<T> final;
  std::vector<Tensor<T>> intermediates;  // y_1 .. y_M
};

// y_m = x + ReconNet(B_m) for every block, final = sum_m w_m y_m.
template <typename T>
MultiOutput<T> memnet_multi_forward(Graph<T>& g, const Tensor<T>& x,
                                    MemNetParams<T>& net, Mode mode);

// alpha/(2N) |target - final|^2 + (1-alpha)/(2MN) sum_m |target - y_m|^2
template <typename T>
Tensor<T> multi_loss(Graph<T>& g, std::span<const Tensor<T>> intermediates,
                     const Tensor<T>& final, const Tensor<T>& target,
                     double alpha, int batch);

struct ParamCounts {
  std::size_t conv_weights = 0;
  std::size_t conv_biases = 0;
  std::size_t batchnorm = 0;  // gammas + betas
  std::size_t ensemble = 0;
};

template <typename T>
ParamCounts count_params(const MemNetParams<T>& net);

// Number of conv kernel elements.
template <typename T>
std::size_t count_conv_weights(const MemNetParams<T>& net) {
  return count_params(net).conv_weights;
}

// ---------------------------------------------------------------------------

template <typename T>
template <typename U>
MemNetParams<U> MemNetParams<T>::cast() const {
  auto cast_tensor = [](const Tensor<T>& t) {
    std::vector<U> v(t.values().begin(), t.values().end());
    return Tensor<U>(t.shape(), std::move(v));
  };
  auto cast_param = [&](const Parameter<T>& p) {
    Parameter<U> q(p.name, p.kind, cast_tensor(p.value));
    q.momentum.assign(p.momentum.begin(), p.momentum.end());
    return q;
  };
  auto cast_conv = [&](const Conv2dLayer<T>& c) {
    return Conv2dLayer<U>{cast_param(c.weight), cast_param(c.bias)};
  };
  auto cast_bn = [&](const BatchNormLayer<T>& b) {
    BatchNormLayer<U> out{cast_param(b.gamma), cast_param(b.beta), RunningStats<U>{}};
    out.stats.mean.assign(b.stats.mean.begin(), b.stats.mean.end());
    out.stats.var.assign(b.stats.var.begin(), b.stats.var.end());
    return out;
  };
  MemNetParams<U> out;
  out.config = config;
  out.fenet = cast_conv(fenet);
  for (const MemoryBlockParams<T>& b : blocks) {
    MemoryBlockParams<U> nb;
    nb.recursion.bn1 = cast_bn(b.recursion.bn1);
    nb.recursion.conv1 = cast_conv(b.recursion.conv1);
    nb.recursion.bn2 = cast_bn(b.recursion.bn2);
    nb.recursion.conv2 = cast_conv(b.recursion.conv2);
    nb.gate_bn = cast_bn(b.gate_bn);
    nb.gate = cast_conv(b.gate);
    out.blocks.push_back(std::move(nb));
  }
  out.reconnet = cast_conv(reconnet);
  if (ensemble.value.defined()) out.ensemble = cast_param(ensemble);
  return out;
}

}  // namespace memnet

#endif  // MEMNET_MODEL_HPP_
