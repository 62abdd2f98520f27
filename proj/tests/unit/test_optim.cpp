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
#include <vector>

#include "doctest.h"
#include "memnet/optim.hpp"
#include "testing.hpp"

namespace memnet {
namespace {

using testing::throws_kind;

Parameter<double> scalar_param(double w, double g, ParamKind kind = ParamKind::kConvWeight) {
  Parameter<double> p("p", kind, Tensor<double>(Shape{}, std::vector<double>{w}));
  p.grad()[0] = g;
  return p;
}

TrainConfig sgd(double momentum, double wd) {
  TrainConfig c;
  c.momentum = momentum;
  c.weight_decay = wd;
  return c;
}

TEST_CASE("sgd_step arithmetic") {
  SUBCASE("first step") {
    auto p = scalar_param(0, 1);
    std::vector<Parameter<double>*> ps{&p};
    sgd_step<double>(ps, 0.1, sgd(0.9, 0));
    CHECK(p.momentum[0] == doctest::Approx(-0.1));
    CHECK(p.value.item() == doctest::Approx(-0.1));
    CHECK(p.grad()[0] == 0.0);
  }
  SUBCASE("two identical steps") {
    auto p = scalar_param(0, 1);
    std::vector<Parameter<double>*> ps{&p};
    sgd_step<double>(ps, 0.1, sgd(0.9, 0));
    p.grad()[0] = 1;
    sgd_step<double>(ps, 0.1, sgd(0.9, 0));
    CHECK(p.momentum[0] == doctest::Approx(-0.19));
    CHECK(p.value.item() == doctest::Approx(-0.29));
  }
  SUBCASE("decay-only step") {
    auto p = scalar_param(1, 0);
    std::vector<Parameter<double>*> ps{&p};
    sgd_step<double>(ps, 0.1, sgd(0.9, 0.1));
    CHECK(p.momentum[0] == doctest::Approx(-0.01));
    CHECK(p.value.item() == doctest::Approx(0.99));
  }
  SUBCASE("weight decay skips biases, BN and ensemble weights") {
    for (ParamKind kind : {ParamKind::kConvBias, ParamKind::kBnGamma, ParamKind::kBnBeta,
                           ParamKind::kEnsemble}) {
      auto p = scalar_param(1, 0, kind);
      std::vector<Parameter<double>*> ps{&p};
      sgd_step<double>(ps, 0.1, sgd(0.9, 0.1));
      CHECK(p.value.item() == 1.0);
    }
  }
  SUBCASE("plain gradient descent without momentum and decay") {
    Parameter<float> p("p", ParamKind::kConvWeight,
                       Tensor<float>(Shape{1, 1, 1, 3}, std::vector<float>{1.0f, -2.0f, 0.5f}));
    const std::vector<float> g{0.25f, 3.0f, -1.0f};
    for (int i = 0; i < 3; ++i) p.grad()[i] = g[i];
    std::vector<Parameter<float>*> ps{&p};
    sgd_step<float>(ps, 0.01, sgd(0, 0));
    const float lr = static_cast<float>(0.01);
    CHECK(p.value.values()[0] == 1.0f - lr * 0.25f);
    CHECK(p.value.values()[1] == -2.0f - lr * 3.0f);
    CHECK(p.value.values()[2] == 0.5f - lr * -1.0f);
  }
  SUBCASE("non-finite gradient aborts before any update") {
    auto a = scalar_param(1, 1);
    auto b = scalar_param(2, NAN);
    std::vector<Parameter<double>*> ps{&a, &b};
    CHECK(throws_kind(ErrorKind::kNumeric, [&] { sgd_step<double>(ps, 0.1, sgd(0.9, 0)); }));
    CHECK(a.value.item() == 1.0);
    CHECK(a.momentum[0] == 0.0);
  }
}

TEST_CASE("lr_at step schedule") {
  TrainConfig c;
  CHECK(lr_at(0, c) == doctest::Approx(0.1));
  CHECK(lr_at(19, c) == doctest::Approx(0.1));
  CHECK(lr_at(20, c) == doctest::Approx(0.01));
  CHECK(lr_at(39, c) == doctest::Approx(0.01));
  CHECK(lr_at(45, c) == doctest::Approx(0.001));
  double prev = lr_at(0, c);
  for (int e = 1; e < 100; ++e) {
    const double lr = lr_at(e, c);
    CHECK(lr <= prev);
    if (e % c.lr_drop_every != 0) CHECK(lr == prev);
    prev = lr;
  }
}

TEST_CASE("clip_gradients") {
  SUBCASE("global norm 2 is halved") {
    auto a = scalar_param(0, std::sqrt(2.0));
    auto b = scalar_param(0, std::sqrt(2.0));
    std::vector<Parameter<double>*> ps{&a, &b};
    CHECK(clip_gradients<double>(ps, 1.0) == doctest::Approx(2.0));
    CHECK(a.grad()[0] == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(b.grad()[0] == doctest::Approx(std::sqrt(2.0) / 2));
  }
  SUBCASE("3-4-5 vector") {
    Parameter<float> p("p", ParamKind::kConvWeight, Tensor<float>(Shape{1, 1, 1, 2}));
    p.grad()[0] = 3;
    p.grad()[1] = 4;
    std::vector<Parameter<float>*> ps{&p};
    CHECK(clip_gradients<float>(ps, 1.0) == doctest::Approx(5.0));
    CHECK(p.grad()[0] == doctest::Approx(0.6));
    CHECK(p.grad()[1] == doctest::Approx(0.8));
  }
  SUBCASE("below threshold is untouched") {
    auto a = scalar_param(0, 0.3);
    std::vector<Parameter<double>*> ps{&a};
    CHECK(clip_gradients<double>(ps, 1.0) == doctest::Approx(0.3));
    CHECK(a.grad()[0] == 0.3);
  }
  SUBCASE("clipped norm bound on random gradients") {
    auto t = testing::random_tensor<double>({3, 4, 5, 6}, 8);
    Parameter<double> p("p", ParamKind::kConvWeight, Tensor<double>(t.shape()));
    for (std::size_t i = 0; i < t.numel(); ++i) p.grad()[i] = 10 * t.values()[i];
    std::vector<Parameter<double>*> ps{&p};
    clip_gradients<double>(ps, 0.5);
    double sq = 0;
    for (double g : p.grad()) sq += g * g;
    CHECK(std::sqrt(sq) <= 0.5 + 1e-6);
  }
}

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.base_lr = 0;
  CHECK(throws_kind(ErrorKind::kConfig, [&] { c.validate(); }));
  c = TrainConfig{};
  c.momentum = 1.0;
  CHECK(throws_kind(ErrorKind::kConfig, [&] { c.validate(); }));
  c = TrainConfig{};
  c.batch_size = 0;
  CHECK(throws_kind(ErrorKind::kConfig, [&] { c.validate(); }));
}

}  // namespace
}  // namespace memnet
