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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "memnet/fft.hpp"
#include "memnet/metrics.hpp"
#include "memnet/synth.hpp"
#include "testing.hpp"

namespace memnet {
namespace {

using testing::random_image;
using testing::throws_kind;

MemNetConfig config(int m, int r, int f, Variant v = Variant::kFull) {
  MemNetConfig c;
  c.blocks = m;
  c.recursions = r;
  c.filters = f;
  c.variant = v;
  return c;
}

TEST_CASE("psnr") {
  const GrayImage a = random_image(20, 30, 1);
  CHECK(psnr(a, a) == kPsnrCap);
  GrayImage b = a;
  for (std::size_t i = 0; i < b.size(); ++i) b.pixels[i] += (i % 2 ? 0.1f : -0.1f);
  CHECK(std::abs(psnr(a, b) - 20.0) < 1e-5);
  const GrayImage c = random_image(20, 30, 2);
  CHECK(psnr(a, c) == doctest::Approx(psnr(c, a)));
  CHECK(psnr(a, c, 3) == doctest::Approx(psnr(c, a, 3)));
  CHECK(throws_kind(ErrorKind::kShape, [&] { psnr(a, random_image(20, 29, 1)); }));

  GrayImage border = a;
  border.at(0, 0) += 0.5f;
  CHECK(psnr(a, border) < kPsnrCap);
  CHECK(psnr(a, border, 1) == kPsnrCap);
}

TEST_CASE("ssim") {
  const GrayImage a = synth_image(40, 37, 1);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  const GrayImage b = random_image(40, 37, 3);
  CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  CHECK(ssim(a, b) < 1.0);
  CHECK(ssim(a, b) >= -1.0);

  const double ma = 0.2, mb = 0.7;
  const double c1 = 0.01 * 0.01;
  const double expected = (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
  CHECK(ssim(GrayImage(16, 16, 0.2f), GrayImage(16, 16, 0.7f)) ==
        doctest::Approx(expected).epsilon(1e-5));
  CHECK(throws_kind(ErrorKind::kValue, [] { ssim(GrayImage(10, 40, 0.1f), GrayImage(10, 40, 0.1f)); }));
  CHECK(throws_kind(ErrorKind::kValue, [&] { ssim(a, a, 14); }));
  CHECK(throws_kind(ErrorKind::kShape, [&] { ssim(a, random_image(40, 36, 1)); }));
}

TEST_CASE("metrics report") {
  MetricsReport r;
  r.spec = "denoise:30";
  r.images = {{"a", 20, 0.5, 25, 0.7}, {"b", 22, 0.6, 28, 0.9}};
  const ImageMetrics avg = r.average();
  CHECK(avg.psnr_degraded == doctest::Approx(21));
  CHECK(avg.ssim_degraded == doctest::Approx(0.55));
  CHECK(avg.psnr == doctest::Approx(26.5));
  CHECK(avg.ssim == doctest::Approx(0.8));
  std::ostringstream out;
  r.write_csv(out);
  std::istringstream lines(out.str());
  std::string line;
  int n = 0;
  std::string last;
  while (std::getline(lines, line)) {
    ++n;
    last = line;
  }
  CHECK(n == 4);
  CHECK(out.str().rfind("image,spec,shave,psnr_degraded,ssim_degraded,psnr,ssim\n", 0) == 0);
  CHECK(last.rfind("average,denoise:30,0,", 0) == 0);
}

TEST_CASE("min-max normalisation") {
  const auto v = min_max_normalize({2, 4, 3});
  CHECK(v == std::vector<double>{0, 1, 0.5});
  CHECK(min_max_normalize({5, 5, 5}) == std::vector<double>{0, 0, 0});
  CHECK(min_max_normalize({}).empty());
}

TEST_CASE("gate weight norms") {
  SUBCASE("full variant") {
    const auto net = MemNetParams<float>::create(config(3, 2, 4), 1);
    const auto norms = gate_weight_norms(net);
    REQUIRE(norms.size() == 3);
    for (int m = 1; m <= 3; ++m) {
      const GateNorms& g = norms[static_cast<std::size_t>(m - 1)];
      CHECK(g.block == m);
      CHECK(g.curve.size() == static_cast<std::size_t>(4 * (2 + m)));
      CHECK(g.raw.size() == g.curve.size());
      for (double v : g.curve) CHECK((v >= 0 && v <= 1));
      CHECK(std::count(g.segment.begin(), g.segment.end(), "short") == 4);
      CHECK(std::count(g.segment.begin(), g.segment.end(), "last") == 4);
      CHECK(std::count(g.segment.begin(), g.segment.end(), "long") == 4 * m);
      CHECK(g.segment.front() == "short");
      CHECK(g.segment.back() == "long");
      REQUIRE(g.long_term);
      REQUIRE(g.short_term);
      REQUIRE(g.last_recursion);
      double s = 0;
      for (std::size_t l = 0; l < 4; ++l) s += g.curve[l];
      CHECK(*g.short_term == doctest::Approx(s / 4));
    }
  }
  SUBCASE("raw norms match the weights") {
    const auto net = MemNetParams<double>::create(config(1, 2, 4), 2);
    const auto w = net.blocks[0].gate.weight.value.values();
    const auto g = gate_weight_norms(net)[0];
    const int lm = 12;
    for (int l = 0; l < lm; ++l) {
      double s = 0;
      for (int o = 0; o < 4; ++o) s += w[static_cast<std::size_t>(o * lm + l)] * w[static_cast<std::size_t>(o * lm + l)];
      CHECK(g.raw[static_cast<std::size_t>(l)] == doctest::Approx(std::sqrt(s)));
    }
  }
  SUBCASE("one-hot weights") {
    auto net = MemNetParams<float>::create(config(1, 3, 4), 3);
    auto w = net.blocks[0].gate.weight.value.mutable_values();
    std::fill(w.begin(), w.end(), 0.0f);
    const int lm = 16;
    const int j = 5;
    w[static_cast<std::size_t>(2 * lm + j)] = -0.3f;
    const auto g = gate_weight_norms(net)[0];
    for (int l = 0; l < lm; ++l) CHECK(g.curve[static_cast<std::size_t>(l)] == (l == j ? 1.0 : 0.0));
  }
  SUBCASE("equal weights give a zero curve") {
    auto net = MemNetParams<float>::create(config(1, 2, 4), 3);
    auto w = net.blocks[0].gate.weight.value.mutable_values();
    std::fill(w.begin(), w.end(), 0.25f);
    const auto g = gate_weight_norms(net)[0];
    for (double v : g.curve) CHECK(v == 0.0);
    CHECK(*g.long_term == 0.0);
  }
  SUBCASE("ablations leave segments empty") {
    const auto nl = gate_weight_norms(MemNetParams<float>::create(config(2, 3, 4, Variant::kNoLongTerm), 1));
    CHECK(!nl[1].long_term);
    CHECK(nl[1].short_term);
    CHECK(nl[1].curve.size() == 12);
    const auto ns = gate_weight_norms(MemNetParams<float>::create(config(2, 3, 4, Variant::kNoShortTerm), 1));
    CHECK(!ns[1].short_term);
    CHECK(ns[1].long_term);
    CHECK(ns[1].last_recursion);
    CHECK(ns[1].curve.size() == 12);
    std::ostringstream bars;
    write_gate_bars_tsv(bars, ns);
    CHECK(bars.str().find("NA") != std::string::npos);
  }
  SUBCASE("tsv") {
    const auto norms = gate_weight_norms(MemNetParams<float>::create(config(2, 2, 4), 1));
    std::ostringstream out;
    write_gate_norms_tsv(out, norms);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 12 + 16);
  }
}

TEST_CASE("dft") {
  for (std::size_t n : {1u, 8u, 12u, 16u, 15u}) {
    std::vector<std::complex<double>> x(n), ref(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = {std::sin(1.0 + i), std::cos(0.3 * i * i)};
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        ref[k] += x[i] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(k * i) / n);
    dft(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(x[k] - ref[k]) < 1e-9);
  }
  CHECK(is_power_of_two(64));
  CHECK(!is_power_of_two(48));
}

TEST_CASE("spectral density") {
  SUBCASE("constant image") {
    const auto d = spectral_density(GrayImage(16, 16, 0.4f), 8);
    CHECK(d.density[0] > 0);
    for (std::size_t b = 1; b < d.density.size(); ++b) CHECK(d.density[b] == doctest::Approx(0).epsilon(1e-20));
  }
  SUBCASE("horizontal sinusoid") {
    GrayImage img(32, 64);
    const int k = 9;
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 64; ++x)
        img.at(y, x) = static_cast<float>(0.5 + 0.3 * std::cos(2 * std::numbers::pi * k * x / 64));
    const auto d = spectral_density(img, 10);
    const std::size_t expected = static_cast<std::size_t>(k * 10 / 32);
    double total = 0, inside = 0;
    for (std::size_t b = 1; b < d.density.size(); ++b) {
      total += d.density[b] * d.count[b];
      if (b == expected) inside += d.density[b] * d.count[b];
    }
    CHECK(inside / total > 0.999);
  }
  SUBCASE("parseval and power conservation") {
    for (auto [h, w] : {std::pair{32, 32}, std::pair{24, 20}, std::pair{17, 40}}) {
      const GrayImage img = synth_image(h, w, 7);
      std::vector<double> v(img.pixels.begin(), img.pixels.end());
      double energy = 0;
      for (double p : v) energy += p * p;
      double spec = 0;
      for (const auto& c : dft2d(v, h, w)) spec += std::norm(c);
      CHECK(std::abs(spec / (h * w) / energy - 1) < 1e-4);
      const auto d = spectral_density(img, 16);
      double binned = 0;
      std::size_t coeffs = 0;
      for (std::size_t b = 0; b < d.density.size(); ++b) {
        CHECK(d.density[b] >= 0);
        binned += d.density[b] * d.count[b];
        coeffs += d.count[b];
      }
      CHECK(coeffs == static_cast<std::size_t>(h * w));
      CHECK(std::abs(binned / spec - 1) < 1e-4);
      for (std::size_t b = 0; b < d.density.size(); ++b) CHECK(d.edges[b] < d.edges[b + 1]);
      CHECK(d.edges.front() == 0.0);
      CHECK(d.edges.back() == 1.0);
    }
  }
  SUBCASE("differences") {
    const auto a = spectral_density(synth_image(32, 32, 1), 8);
    const auto b = spectral_density(random_image(32, 32, 2), 8);
    for (double v : density_difference(a, a)) CHECK(v == 0.0);
    const auto ab = density_difference(a, b);
    const auto ba = density_difference(b, a);
    for (std::size_t i = 0; i < ab.size(); ++i) CHECK(ab[i] == -ba[i]);
    CHECK(throws_kind(ErrorKind::kShape, [&] { density_difference(a, spectral_density(synth_image(32, 32, 1), 4)); }));
  }
  CHECK(throws_kind(ErrorKind::kValue, [] { spectral_density(GrayImage(7, 16, 0.0f), 4); }));
}

}  // namespace
}  // namespace memnet
