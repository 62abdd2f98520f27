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

#include "memnet/fft.hpp"

#include <cmath>
#include <utility>

#include "memnet/error.hpp"

namespace memnet {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void fft_radix2(std::span<std::complex<double>> a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * M_PI / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

void dft_direct(std::span<std::complex<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      // Reduce k*t mod n first so the angle stays small and accurate.
      const double angle = -2.0 * M_PI * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += a[t] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), a.begin());
}

}  // namespace

void dft(std::span<std::complex<double>> data) {
  if (data.size() <= 1) return;
  if (is_power_of_two(data.size()))
    fft_radix2(data);
  else
    dft_direct(data);
}

std::vector<std::complex<double>> dft2d(std::span<const double> values, int h, int w) {
  require(h >= 1 && w >= 1 && values.size() == static_cast<std::size_t>(h) * w,
          ErrorKind::kShape, "dft2d: size does not match dimensions");
  std::vector<std::complex<double>> grid(values.begin(), values.end());
  for (int y = 0; y < h; ++y)
    dft(std::span(grid).subspan(static_cast<std::size_t>(y) * w, static_cast<std::size_t>(w)));
  std::vector<std::complex<double>> column(static_cast<std::size_t>(h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) column[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * w + x];
    dft(column);
    for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = column[static_cast<std::size_t>(y)];
  }
  return grid;
}

}  // namespace memnet
