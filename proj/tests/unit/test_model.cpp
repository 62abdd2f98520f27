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

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gradcheck.hpp"
#include "memnet/layers.hpp"
#include "memnet/model.hpp"
#include "testing.hpp"

namespace memnet {
namespace {

using testing::check_gradients;
using testing::random_tensor;
using testing::throws_kind;

template <typename T>
void fill(Parameter<T>& p, T v) {
  for (T& x : p.value.mutable_values()) x = v;
}

template <typename T>
std::vector<T> to_vec(const Tensor<T>& t) {
  return {t.values().begin(), t.values().end()};
}

MemNetConfig small_config(int m, int r, int f, Variant v = Variant::kFull, bool multi = false) {
  MemNetConfig c;
  c.blocks = m;
  c.recursions = r;
  c.filters = f;
  c.variant = v;
  c.multi_supervised = multi;
  return c;
}

TEST_CASE("msra_init statistics") {
  SUBCASE("fan_in 576 over 1e5 draws") {
    Rng rng(derive_seed(1, Stream::kTest, 0));
    const auto t = msra_init<double>(576, Shape{100000, 1, 1, 1}, rng);
    const auto v = t.values();
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double sq = 0;
    for (double x : v) sq += (x - mean) * (x - mean);
    const double sd = std::sqrt(sq / (v.size() - 1));
    const double sigma = std::sqrt(2.0 / 576);
    CHECK(sigma == doctest::Approx(0.0589).epsilon(1e-3));
    CHECK(std::abs(mean) < 0.01 * sigma);
    CHECK(std::abs(sd / sigma - 1) < 0.02);
  }
  SUBCASE("fan_in 2 gives unit deviation") {
    Rng rng(derive_seed(2, Stream::kTest, 0));
    const auto t = msra_init<double>(2, Shape{100000, 1, 1, 1}, rng);
    double sq = 0;
    for (double x : t.values()) sq += x * x;
    CHECK(std::abs(std::sqrt(sq / t.numel()) - 1.0) < 0.02);
  }
  SUBCASE("deterministic and rejects zero fan-in") {
    Rng a(5), b(5);
    CHECK(to_vec(msra_init<float>(9, Shape{4, 1, 3, 3}, a)) ==
          to_vec(msra_init<float>(9, Shape{4, 1, 3, 3}, b)));
    CHECK(throws_kind(ErrorKind::kValue, [&] { msra_init<float>(0, Shape{}, a); }));
  }
}

TEST_CASE("residual block identities") {
  Rng rng(3);
  auto p = ResidualBlockParams<float>::create("r", 4, rng);
  auto h = random_tensor<float>({2, 4, 5, 5}, 9);
  for (Mode mode : {Mode::kTrain, Mode::kEval}) {
    Graph<float> g(false);
    const auto f = residual_function(g, h, p, mode);
    const auto b = residual_block(g, h, p, mode);
    CHECK(f.shape() == h.shape());
    for (std::size_t i = 0; i < h.numel(); ++i)
      CHECK(b.values()[i] - h.values()[i] == doctest::Approx(f.values()[i]).epsilon(1e-5));
  }
  fill(p.conv2.weight, 0.0f);
  for (Mode mode : {Mode::kTrain, Mode::kEval}) {
    Graph<float> g(false);
    const auto f = residual_function(g, h, p, mode);
    for (float v : f.values()) CHECK(v == 0.0f);
    CHECK(to_vec(residual_block(g, h, p, mode)) == to_vec(h));
  }
  Graph<float> g(false);
  CHECK(throws_kind(ErrorKind::kShape,
                    [&] { residual_function(g, random_tensor<float>({1, 3, 4, 4}, 1), p, Mode::kTrain); }));
}

TEST_CASE("residual block gradients") {
  Rng rng(4);
  auto p = ResidualBlockParams<double>::create("r", 3, rng);
  auto h = random_tensor<double>({2, 3, 4, 4}, 10, true);
  auto target = random_tensor<double>({2, 3, 4, 4}, 11);
  const auto r = check_gradients(
      [&](Graph<double>& g) { return mse_half(g, residual_block(g, h, p, Mode::kTrain), target, 0.5); },
      {h, p.conv1.weight.value, p.conv2.weight.value, p.bn1.gamma.value, p.bn2.beta.value});
  CHECK(r.max_rel < 1e-4);
}

TEST_CASE("recursive unit") {
  auto net = MemNetParams<float>::create(small_config(1, 3, 4), 7);
  auto& block = net.blocks[0];
  auto b = random_tensor<float>({2, 4, 6, 6}, 12);
  SUBCASE("matches explicit sequential application") {
    Graph<float> g(false);
    const auto hs = recursive_unit(g, b, block, 3, Mode::kEval);
    REQUIRE(hs.size() == 3);
    Tensor<float> h = b;
    for (int r = 0; r < 3; ++r) {
      h = residual_block(g, h, block.recursion, Mode::kEval);
      CHECK(to_vec(hs[static_cast<std::size_t>(r)]) == to_vec(h));
    }
    const auto one = recursive_unit(g, b, block, 1, Mode::kEval);
    REQUIRE(one.size() == 1);
    CHECK(to_vec(one[0]) == to_vec(residual_block(g, b, block.recursion, Mode::kEval)));
  }
  SUBCASE("zero W2 leaves every recursion at B_prev") {
    fill(block.recursion.conv2.weight, 0.0f);
    Graph<float> g(false);
    for (const auto& h : recursive_unit(g, b, block, 3, Mode::kTrain)) CHECK(to_vec(h) == to_vec(b));
  }
}

TEST_CASE("shared recursion weights receive the summed gradient") {
  auto net = MemNetParams<double>::create(small_config(1, 3, 2), 8);
  auto& block = net.blocks[0];
  auto b = random_tensor<double>({1, 2, 4, 4}, 13);
  auto target = random_tensor<double>({1, 2, 4, 4}, 14);
  const auto r = check_gradients(
      [&](Graph<double>& g) {
        return mse_half(g, recursive_unit(g, b, block, 3, Mode::kTrain).back(), target, 0.5);
      },
      {block.recursion.conv1.weight.value, block.recursion.conv2.weight.value,
       block.recursion.bn1.gamma.value});
  CHECK(r.max_rel < 1e-4);
}

TEST_CASE("gate unit") {
  auto net = MemNetParams<float>::create(small_config(1, 2, 2), 9);
  auto& block = net.blocks[0];
  REQUIRE(block.gate.in_channels() == 6);
  auto s1 = random_tensor<float>({1, 2, 3, 3}, 15);
  auto s2 = random_tensor<float>({1, 2, 3, 3}, 16);
  auto l0 = random_tensor<float>({1, 2, 3, 3}, 17);
  for (auto* t : {&s1, &s2, &l0})
    for (float& v : t->mutable_values()) v = std::abs(v);
  std::vector<Tensor<float>> shorts{s1, s2}, longs{l0};

  SUBCASE("one-hot weight selects a channel of the concatenation") {
    for (int j = 0; j < 6; ++j) {
      auto w = block.gate.weight.value.mutable_values();
      std::fill(w.begin(), w.end(), 0.0f);
      w[j] = 1.0f;
      Graph<float> g(false);
      const auto out = gate_unit<float>(g, shorts, longs, block, Mode::kEval);
      const Tensor<float>& src = j < 2 ? s1 : (j < 4 ? s2 : l0);
      const int c = j % 2;
      for (int i = 0; i < 9; ++i)
        CHECK(out.values()[i] ==
              doctest::Approx(src.values()[c * 9 + i] / std::sqrt(1 + 1e-5)).epsilon(1e-6));
    }
  }
  SUBCASE("zero weight gives zeros") {
    fill(block.gate.weight, 0.0f);
    Graph<float> g(false);
    const auto out = gate_unit<float>(g, shorts, longs, block, Mode::kTrain);
    for (float v : out.values()) CHECK(v == 0.0f);
  }
  SUBCASE("channel-weighted sum oracle") {
    Graph<float> g(false);
    const auto out = gate_unit<float>(g, shorts, longs, block, Mode::kEval);
    const auto w = block.gate.weight.value.values();
    for (int co = 0; co < 2; ++co)
      for (int i = 0; i < 9; ++i) {
        double acc = 0;
        for (int l = 0; l < 6; ++l) {
          const Tensor<float>& src = l < 2 ? s1 : (l < 4 ? s2 : l0);
          const double tau = std::max(0.0, src.values()[(l % 2) * 9 + i] / std::sqrt(1 + 1e-5));
          acc += w[co * 6 + l] * tau;
        }
        CHECK(out.values()[co * 9 + i] == doctest::Approx(acc).epsilon(1e-5));
      }
  }
  SUBCASE("wrong channel count") {
    Graph<float> g(false);
    std::vector<Tensor<float>> none;
    CHECK(throws_kind(ErrorKind::kShape, [&] { gate_unit<float>(g, shorts, none, block, Mode::kTrain); }));
  }
}

TEST_CASE("gate unit gradients") {
  auto net = MemNetParams<double>::create(small_config(1, 2, 2), 10);
  auto& block = net.blocks[0];
  auto s1 = random_tensor<double>({2, 2, 3, 3}, 18, true);
  auto s2 = random_tensor<double>({2, 2, 3, 3}, 19, true);
  auto l0 = random_tensor<double>({2, 2, 3, 3}, 20, true);
  auto target = random_tensor<double>({2, 2, 3, 3}, 21);
  const auto r = check_gradients(
      [&](Graph<double>& g) {
        std::vector<Tensor<double>> shorts{s1, s2}, longs{l0};
        return mse_half(g, gate_unit<double>(g, shorts, longs, block, Mode::kTrain), target, 0.5);
      },
      {s1, s2, l0, block.gate.weight.value, block.gate.bias.value, block.gate_bn.gamma.value});
  CHECK(r.max_rel < 1e-4);
}

TEST_CASE("gate input channels") {
  const auto full = small_config(6, 6, 64);
  CHECK(gate_input_channels(full, 1) == 448);
  for (int m = 1; m <= 6; ++m) CHECK(gate_input_channels(full, m) == 64 * (6 + m));
  CHECK(gate_input_channels(small_config(6, 6, 64, Variant::kNoLongTerm), 4) == 384);
  CHECK(gate_input_channels(small_config(6, 6, 64, Variant::kNoShortTerm), 3) == 256);
  auto net = MemNetParams<float>::create(small_config(3, 2, 4), 1);
  for (int m = 1; m <= 3; ++m)
    CHECK(net.blocks[static_cast<std::size_t>(m - 1)].gate.in_channels() == 4 * (2 + m));
}

TEST_CASE("memory block wiring") {
  auto net = MemNetParams<float>::create(small_config(2, 2, 3), 2);
  auto b0 = random_tensor<float>({1, 3, 4, 4}, 22);
  Graph<float> g(false);
  std::vector<Tensor<float>> none;
  CHECK(throws_kind(ErrorKind::kValue, [&] {
    memory_block<float>(g, b0, none, net.blocks[0], net.config, 1, Mode::kTrain);
  }));
  std::vector<Tensor<float>> longs{b0};
  const auto b1 = memory_block<float>(g, b0, longs, net.blocks[0], net.config, 1, Mode::kTrain);
  CHECK(b1.shape() == b0.shape());

  const auto hs = recursive_unit(g, b0, net.blocks[0], 2, Mode::kEval);
  std::vector<Tensor<float>> shorts(hs.begin(), hs.end());
  CHECK(to_vec(memory_block<float>(g, b0, longs, net.blocks[0], net.config, 1, Mode::kEval)) ==
        to_vec(gate_unit<float>(g, shorts, longs, net.blocks[0], Mode::kEval)));
}

TEST_CASE("ablation variants") {
  for (Variant v : {Variant::kNoLongTerm, Variant::kNoShortTerm}) {
    const auto cfg = small_config(3, 2, 4, v);
    auto net = MemNetParams<float>::create(cfg, 3);
    for (int m = 1; m <= 3; ++m)
      CHECK(net.blocks[static_cast<std::size_t>(m - 1)].gate.in_channels() ==
            (v == Variant::kNoLongTerm ? 4 * 2 : 4 * (1 + m)));
    Graph<float> g(false);
    const auto y = memnet_forward(g, random_tensor<float>({2, 1, 7, 7}, 4), net, Mode::kTrain);
    CHECK(y.shape() == Shape{2, 1, 7, 7});
  }
  CHECK(parse_variant("nl") == Variant::kNoLongTerm);
  CHECK(parse_variant("no_short_term") == Variant::kNoShortTerm);
  CHECK(parse_variant(to_string(Variant::kFull)) == Variant::kFull);
  CHECK(throws_kind(ErrorKind::kConfig, [] { parse_variant("dense"); }));
}

TEST_CASE("global residual identity") {
  auto net = MemNetParams<float>::create(small_config(2, 2, 4), 5);
  fill(net.reconnet.weight, 0.0f);
  fill(net.reconnet.bias, 0.0f);
  for (auto shape : {Shape{1, 1, 31, 31}, Shape{2, 1, 5, 9}}) {
    auto x = random_tensor<float>(shape, 23);
    for (Mode mode : {Mode::kTrain, Mode::kEval}) {
      Graph<float> g(false);
      CHECK(to_vec(memnet_forward(g, x, net, mode)) == to_vec(x));
    }
  }
  Graph<float> g(false);
  CHECK(throws_kind(ErrorKind::kShape,
                    [&] { memnet_forward(g, random_tensor<float>({1, 2, 4, 4}, 1), net, Mode::kEval); }));
}

TEST_CASE("multi-supervised forward") {
  auto net = MemNetParams<float>::create(small_config(3, 1, 4, Variant::kFull, true), 6);
  REQUIRE(net.ensemble.value.numel() == 3);
  for (float w : net.ensemble.value.values()) CHECK(w == doctest::Approx(1.0 / 3));
  auto x = random_tensor<float>({2, 1, 6, 6}, 24);

  SUBCASE("final is the ensemble-weighted sum") {
    Graph<float> g(false);
    const auto out = memnet_multi_forward(g, x, net, Mode::kEval);
    REQUIRE(out.intermediates.size() == 3);
    const auto w = net.ensemble.value.values();
    for (std::size_t i = 0; i < x.numel(); ++i) {
      double s = 0;
      for (int m = 0; m < 3; ++m) s += w[m] * out.intermediates[m].values()[i];
      CHECK(std::abs(out.final.values()[i] - s) < 1e-6);
    }
  }
  SUBCASE("one-hot ensemble picks y_1") {
    auto w = net.ensemble.value.mutable_values();
    w[0] = 1;
    w[1] = 0;
    w[2] = 0;
    Graph<float> g(false);
    const auto out = memnet_multi_forward(g, x, net, Mode::kEval);
    CHECK(to_vec(out.final) == to_vec(out.intermediates[0]));
  }
  SUBCASE("equal predictions with uniform weights") {
    fill(net.reconnet.weight, 0.0f);
    Graph<float> g(false);
    const auto out = memnet_multi_forward(g, x, net, Mode::kEval);
    for (std::size_t i = 0; i < x.numel(); ++i)
      CHECK(out.final.values()[i] == doctest::Approx(out.intermediates[0].values()[i]).epsilon(1e-6));
  }
  SUBCASE("basic network refuses multi forward") {
    auto basic = MemNetParams<float>::create(small_config(1, 1, 2), 1);
    Graph<float> g(false);
    CHECK(throws_kind(ErrorKind::kConfig, [&] { memnet_multi_forward(g, x, basic, Mode::kEval); }));
  }
}

TEST_CASE("multi loss") {
  auto a = random_tensor<float>({2, 1, 3, 3}, 25);
  auto b = random_tensor<float>({2, 1, 3, 3}, 26);
  auto target = random_tensor<float>({2, 1, 3, 3}, 27);
  auto final = random_tensor<float>({2, 1, 3, 3}, 28);
  std::vector<Tensor<float>> ys{a, b};
  Graph<float> g(false);
  CHECK(multi_loss<float>(g, ys, final, target, 1.0, 2).item() ==
        doctest::Approx(mse_half(g, final, target, 1.0 / 4).item()));
  const double expected = 0.3 / 4 * mse_half(g, final, target, 1.0).item() +
                          0.7 / 8 * (mse_half(g, a, target, 1.0).item() + mse_half(g, b, target, 1.0).item());
  CHECK(multi_loss<float>(g, ys, final, target, 0.3, 2).item() == doctest::Approx(expected).epsilon(1e-5));
  std::vector<Tensor<float>> exact{target, target};
  CHECK(multi_loss<float>(g, exact, target, target, 0.5, 2).item() == 0.0f);
  CHECK(small_config(6, 6, 64).loss_alpha() == doctest::Approx(1.0 / 7));
  CHECK(small_config(6, 6, 64).loss_alpha() == doctest::Approx(0.142857).epsilon(1e-6));
}

TEST_CASE("multi-supervised gradients including ensemble weights") {
  auto net = MemNetParams<double>::create(small_config(2, 1, 2, Variant::kFull, true), 11);
  auto x = random_tensor<double>({2, 1, 5, 5}, 29);
  auto target = random_tensor<double>({2, 1, 5, 5}, 30);
  const auto r = check_gradients(
      [&](Graph<double>& g) {
        auto out = memnet_multi_forward(g, x, net, Mode::kTrain);
        return multi_loss<double>(g, out.intermediates, out.final, target,
                                  net.config.loss_alpha(), 2);
      },
      {net.ensemble.value, net.reconnet.weight.value, net.blocks[1].gate.weight.value});
  CHECK(r.max_rel < 1e-4);
}

TEST_CASE("layer and weight counts") {
  CHECK(count_layers(small_config(4, 6, 64)) == 54);
  CHECK(count_layers(small_config(6, 6, 64)) == 80);
  CHECK(count_layers(small_config(6, 8, 64)) == 104);
  CHECK(count_layers(small_config(10, 10, 64)) == 212);
  CHECK(count_layers(small_config(1, 1, 1)) == 5);

  const auto big = MemNetParams<float>::create(small_config(6, 6, 64), 1);
  const auto counts = count_params(big);
  CHECK(count_conv_weights(big) == 676992);
  CHECK(counts.conv_weights == 576 + 6 * 2 * 36864 + 4096 * (7 + 8 + 9 + 10 + 11 + 12) + 576);
  CHECK(counts.conv_biases == 64 + 6 * (64 + 64 + 64) + 1);
  CHECK(counts.ensemble == 0);

  const auto tiny = MemNetParams<float>::create(small_config(1, 1, 1), 1);
  CHECK(count_conv_weights(tiny) == 38);
  CHECK(count_params(MemNetParams<float>::create(small_config(3, 1, 1, Variant::kFull, true), 1)).ensemble == 3);
}

TEST_CASE("config validation and parameter order") {
  CHECK(throws_kind(ErrorKind::kConfig, [] { small_config(0, 1, 1).validate(); }));
  CHECK(throws_kind(ErrorKind::kConfig, [] {
    auto c = small_config(1, 1, 1);
    c.alpha = 1.5;
    c.validate();
  }));
  auto net = MemNetParams<float>::create(small_config(2, 2, 3, Variant::kFull, true), 1);
  const auto params = net.parameters();
  CHECK(params.size() == 2 + 2 * 12 + 2 + 1);
  CHECK(params.front()->name == "fenet.weight");
  CHECK(params[2]->kind == ParamKind::kBnGamma);
  CHECK(params.back()->kind == ParamKind::kEnsemble);
  CHECK(net.batchnorms().size() == 6);
}

TEST_CASE("same seed builds the same network, other seeds differ") {
  auto a = MemNetParams<float>::create(small_config(2, 2, 4), 42);
  auto b = MemNetParams<float>::create(small_config(2, 2, 4), 42);
  auto c = MemNetParams<float>::create(small_config(2, 2, 4), 43);
  const auto pa = a.parameters(), pb = b.parameters(), pc = c.parameters();
  bool all_equal = true, any_diff = false;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    all_equal = all_equal && to_vec(pa[i]->value) == to_vec(pb[i]->value);
    any_diff = any_diff || to_vec(pa[i]->value) != to_vec(pc[i]->value);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("end-to-end gradient on M2R2/F4") {
  auto net = MemNetParams<double>::create(small_config(2, 2, 4), 12);
  auto x = random_tensor<double>({2, 1, 8, 8}, 31, false, 0.3);
  auto target = random_tensor<double>({2, 1, 8, 8}, 32, false, 0.3);
  std::vector<Tensor<double>> leaves;
  for (auto* p : net.parameters()) leaves.push_back(p->value);
  const auto r = check_gradients(
      [&](Graph<double>& g) { return mse_half(g, memnet_forward(g, x, net, Mode::kTrain), target, 0.25); },
      leaves);
  CHECK(r.max_rel < 1e-4);
  MESSAGE("checked " << r.checked << " entries, " << r.kinks << " kink crossings, max rel "
                      << r.max_rel);
}

}  // namespace
}  // namespace memnet
