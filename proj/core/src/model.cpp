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

#include "memnet/model.hpp"

#include <string>

namespace memnet {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull: return "full";
    case Variant::kNoLongTerm: return "no_long_term";
    case Variant::kNoShortTerm: return "no_short_term";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "full") return Variant::kFull;
  if (text == "no_long_term" || text == "nl") return Variant::kNoLongTerm;
  if (text == "no_short_term" || text == "ns") return Variant::kNoShortTerm;
  fail(ErrorKind::kConfig, "unknown variant '" + std::string(text) + "'");
}

void MemNetConfig::validate() const {
  require(blocks >= 1 && recursions >= 1 && filters >= 1, ErrorKind::kConfig,
          "M, R and F must all be at least 1");
  if (alpha)
    require(*alpha >= 0.0 && *alpha <= 1.0, ErrorKind::kConfig,
            "alpha must lie in [0, 1]");
}

int count_layers(const MemNetConfig& config) {
  config.validate();
  return 2 + config.blocks * (2 * config.recursions + 1);
}

int gate_input_channels(const MemNetConfig& config, int block) {
  require(block >= 1 && block <= config.blocks, ErrorKind::kValue,
          "block index out of range");
  switch (config.variant) {
    case Variant::kFull: return config.filters * (config.recursions + block);
    case Variant::kNoLongTerm: return config.filters * config.recursions;
    case Variant::kNoShortTerm: return config.filters * (1 + block);
  }
  return 0;
}

template <typename T>
MemNetParams<T> MemNetParams<T>::create(const MemNetConfig& config,
                                        std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, Stream::kInit, 0));
  const int f = config.filters;
  MemNetParams net;
  net.config = config;
  net.fenet = Conv2dLayer<T>::create("fenet", 1, f, 3, rng);
  for (int m = 1; m <= config.blocks; ++m) {
    const std::string prefix = "block" + std::to_string(m);
    const int lm = gate_input_channels(config, m);
    MemoryBlockParams<T> b;
    b.recursion = ResidualBlockParams<T>::create(prefix + ".recursion", f, rng);
    b.gate_bn = BatchNormLayer<T>::create(prefix + ".gate_bn", lm);
    b.gate = Conv2dLayer<T>::create(prefix + ".gate", lm, f, 1, rng);
    net.blocks.push_back(std::move(b));
  }
  net.reconnet = Conv2dLayer<T>::create("reconnet", f, 1, 3, rng);
  if (config.multi_supervised) {
    net.ensemble = Parameter<T>(
        "ensemble", ParamKind::kEnsemble,
        Tensor<T>(Shape{1, 1, 1, config.blocks},
                  std::vector<T>(config.blocks, T(1) / T(config.blocks))));
  }
  return net;
}

template <typename T>
std::vector<Parameter<T>*> MemNetParams<T>::parameters() {
  std::vector<Parameter<T>*> out{&fenet.weight, &fenet.bias};
  for (MemoryBlockParams<T>& b : blocks) {
    ResidualBlockParams<T>& r = b.recursion;
    for (Parameter<T>* p :
         {&r.bn1.gamma, &r.bn1.beta, &r.conv1.weight, &r.conv1.bias, &r.bn2.gamma,
          &r.bn2.beta, &r.conv2.weight, &r.conv2.bias, &b.gate_bn.gamma,
          &b.gate_bn.beta, &b.gate.weight, &b.gate.bias})
      out.push_back(p);
  }
  out.push_back(&reconnet.weight);
  out.push_back(&reconnet.bias);
  if (config.multi_supervised) out.push_back(&ensemble);
  return out;
}

template <typename T>
std::vector<BatchNormLayer<T>*> MemNetParams<T>::batchnorms() {
  std::vector<BatchNormLayer<T>*> out;
  for (MemoryBlockParams<T>& b : blocks) {
    out.push_back(&b.recursion.bn1);
    out.push_back(&b.recursion.bn2);
    out.push_back(&b.gate_bn);
  }
  return out;
}

template <typename T>
void MemNetParams<T>::zero_grad() {
  for (Parameter<T>* p : parameters()) p->value.zero_grad();
}

template <typename T>
std::vector<Tensor<T>> recursive_unit(Graph<T>& g, const Tensor<T>& b_prev,
                                      MemoryBlockParams<T>& block, int recursions,
                                      Mode mode) {
  require(recursions >= 1, ErrorKind::kValue, "recursive_unit: R must be >= 1");
  std::vector<Tensor<T>> out;
  out.reserve(static_cast<std::size_t>(recursions));
  Tensor<T> h = b_prev;
  for (int r = 0; r < recursions; ++r) {
    h = residual_block(g, h, block.recursion, mode);
    out.push_back(h);
  }
  return out;
}

template <typename T>
Tensor<T> gate_unit(Graph<T>& g, std::span<const Tensor<T>> short_mems,
                    std::span<const Tensor<T>> long_mems,
                    MemoryBlockParams<T>& block, Mode mode) {
  std::vector<Tensor<T>> parts(short_mems.begin(), short_mems.end());
  parts.insert(parts.end(), long_mems.begin(), long_mems.end());
  int channels = 0;
  for (const Tensor<T>& p : parts) channels += p.shape().c;
  require(channels == block.gate.in_channels(), ErrorKind::kShape,
          "gate unit expects " + std::to_string(block.gate.in_channels()) +
              " input channels, memories provide " + std::to_string(channels));
  Tensor<T> cat = parts.size() == 1 ? parts.front()
                                    : concat_channels<T>(g, parts);
  return block.gate(g, bn_relu(g, cat, block.gate_bn, mode));
}

template <typename T>
Tensor<T> memory_block(Graph<T>& g, const Tensor<T>& b_prev,
                       std::span<const Tensor<T>> long_mems,
                       MemoryBlockParams<T>& block, const MemNetConfig& config,
                       int m, Mode mode) {
  require(static_cast<int>(long_mems.size()) == m, ErrorKind::kValue,
          "memory block " + std::to_string(m) + " needs " + std::to_string(m) +
              " long-term memories, got " + std::to_string(long_mems.size()));
  std::vector<Tensor<T>> short_mems =
      recursive_unit(g, b_prev, block, config.recursions, mode);
  switch (config.variant) {
    case Variant::kFull:
      return gate_unit<T>(g, short_mems, long_mems, block, mode);
    case Variant::kNoLongTerm:
      return gate_unit<T>(g, short_mems, {}, block, mode);
    case Variant::kNoShortTerm:
      return gate_unit<T>(g, std::span<const Tensor<T>>(&short_mems.back(), 1),
                          long_mems, block, mode);
  }
  fail(ErrorKind::kConfig, "unknown variant");
}

namespace {

template <typename T>
void check_input(const Tensor<T>& x) {
  require(x.shape().c == 1, ErrorKind::kShape,
          "MemNet expects single-channel input, got " + x.shape().str());
}

// Runs FENet and all memory blocks; calls on_block(m, B_m) after each block.
template <typename T, typename OnBlock>
Tensor<T> run_blocks(Graph<T>& g, const Tensor<T>& x, MemNetParams<T>& net,
                     Mode mode, OnBlock&& on_block) {
  std::vector<Tensor<T>> memories{net.fenet(g, x)};
  for (int m = 1; m <= net.config.blocks; ++m) {
    Tensor<T> b = memory_block<T>(g, memories.back(), memories,
                                  net.blocks[static_cast<std::size_t>(m - 1)],
                                  net.config, m, mode);
    on_block(m, b);
    memories.push_back(std::move(b));
  }
  return memories.back();
}

}  // namespace

template <typename T>
Tensor<T> memnet_forward(Graph<T>& g, const Tensor<T>& x, MemNetParams<T>& net,
                         Mode mode) {
  check_input(x);
  Tensor<T> last = run_blocks(g, x, net, mode, [](int, const Tensor<T>&) {});
  return add(g, x, net.reconnet(g, last));
}

template <typename T>
MultiOutput<T> memnet_multi_forward(Graph<T>& g, const Tensor<T>& x,
                                    MemNetParams<T>& net, Mode mode) {
  check_input(x);
  require(net.config.multi_supervised, ErrorKind::kConfig,
          "multi-supervised forward on a basic network");
  MultiOutput<T> out;
  run_blocks(g, x, net, mode, [&](int, const Tensor<T>& b) {
    out.intermediates.push_back(add(g, x, net.reconnet(g, b)));
  });
  out.final = weighted_sum<T>(g, out.intermediates, net.ensemble.value);
  return out;
}

template <typename T>
Tensor<T> multi_loss(Graph<T>& g, std::span<const Tensor<T>> intermediates,
                     const Tensor<T>& final, const Tensor<T>& target,
                     double alpha, int batch) {
  require(alpha >= 0.0 && alpha <= 1.0, ErrorKind::kValue,
          "multi_loss: alpha must lie in [0, 1]");
  require(batch >= 1 && !intermediates.empty(), ErrorKind::kValue,
          "multi_loss: need a positive batch and at least one prediction");
  const double per = 1.0 / (2.0 * batch);
  const double m = static_cast<double>(intermediates.size());
  Tensor<T> loss = mse_half(g, final, target, alpha * per);
  for (const Tensor<T>& y : intermediates)
    loss = add(g, loss, mse_half(g, y, target, (1.0 - alpha) * per / m));
  return loss;
}

template <typename T>
ParamCounts count_params(const MemNetParams<T>& net) {
  ParamCounts c;
  for (const Parameter<T>* p : const_cast<MemNetParams<T>&>(net).parameters()) {
    switch (p->kind) {
      case ParamKind::kConvWeight: c.conv_weights += p->value.numel(); break;
      case ParamKind::kConvBias: c.conv_biases += p->value.numel(); break;
      case ParamKind::kBnGamma:
      case ParamKind::kBnBeta: c.batchnorm += p->value.numel(); break;
      case ParamKind::kEnsemble: c.ensemble += p->value.numel(); break;
    }
  }
  return c;
}

#define MEMNET_INSTANTIATE_MODEL(T)                                                \
  template struct MemNetParams<T>;                                                 \
  template std::vector<Tensor<T>> recursive_unit<T>(                               \
      Graph<T>&, const Tensor<T>&, MemoryBlockParams<T>&, int, Mode);              \
  template Tensor<T> gate_unit<T>(Graph<T>&, std::span<const Tensor<T>>,           \
                                  std::span<const Tensor<T>>,                      \
                                  MemoryBlockParams<T>&, Mode);                    \
  template Tensor<T> memory_block<T>(Graph<T>&, const Tensor<T>&,                  \
                                     std::span<const Tensor<T>>,                   \
                                     MemoryBlockParams<T>&, const MemNetConfig&,   \
                                     int, Mode);                                   \
  template Tensor<T> memnet_forward<T>(Graph<T>&, const Tensor<T>&,                \
                                       MemNetParams<T>&, Mode);                    \
  template MultiOutput<T> memnet_multi_forward<T>(Graph<T>&, const Tensor<T>&,     \
                                                  MemNetParams<T>&, Mode);         \
  template Tensor<T> multi_loss<T>(Graph<T>&, std::span<const Tensor<T>>,          \
                                   const Tensor<T>&, const Tensor<T>&, double,     \
                                   int);                                           \
  template ParamCounts count_params<T>(const MemNetParams<T>&);

MEMNET_INSTANTIATE_MODEL(float)
MEMNET_INSTANTIATE_MODEL(double)

#undef MEMNET_INSTANTIATE_MODEL

}  // namespace memnet
