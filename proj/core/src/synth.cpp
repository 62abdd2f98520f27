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

#include "memnet/synth.hpp"

#include <algorithm>
#include <cmath>

#include "memnet/rng.hpp"

namespace memnet {

GrayImage synth_image(int height, int width, std::uint64_t seed) {
  Rng rng(derive_seed(seed, Stream::kSynth, 0));
  GrayImage img(height, width);

  const double base = 0.3 + 0.4 * rng.uniform();
  double fx[3], fy[3], amp[3], phase[3];
  for (int i = 0; i < 3; ++i) {
    fx[i] = (rng.uniform() * 2 - 1) * 2.5 / width;
    fy[i] = (rng.uniform() * 2 - 1) * 2.5 / height;
    amp[i] = 0.08 * rng.uniform();
    phase[i] = 2 * M_PI * rng.uniform();
  }
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double v = base;
      for (int i = 0; i < 3; ++i) v += amp[i] * std::cos(2 * M_PI * (fx[i] * x + fy[i] * y) + phase[i]);
      img.at(y, x) = static_cast<float>(v);
    }

  const int shapes = 6 + static_cast<int>(rng.below(7));
  for (int s = 0; s < shapes; ++s) {
    const bool ellipse = rng.uniform() < 0.5;
    const double cy = rng.uniform() * height;
    const double cx = rng.uniform() * width;
    const double ry = (0.05 + 0.2 * rng.uniform()) * height;
    const double rx = (0.05 + 0.2 * rng.uniform()) * width;
    const double level = 0.1 + 0.8 * rng.uniform();
    const double angle = M_PI * rng.uniform();
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double dy = y - cy, dx = x - cx;
        const double u = (ca * dx + sa * dy) / rx;
        const double v = (-sa * dx + ca * dy) / ry;
        const bool inside = ellipse ? u * u + v * v <= 1.0 : std::abs(u) <= 1 && std::abs(v) <= 1;
        if (inside) img.at(y, x) = static_cast<float>(level);
      }
  }

  const int gratings = 1 + static_cast<int>(rng.below(3));
  for (int t = 0; t < gratings; ++t) {
    const int h = std::max(4, static_cast<int>((0.15 + 0.2 * rng.uniform()) * height));
    const int w = std::max(4, static_cast<int>((0.15 + 0.2 * rng.uniform()) * width));
    const int top = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, height - h))));
    const int left = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, width - w))));
    const double period = 3 + 9 * rng.uniform();
    const double angle = M_PI * rng.uniform();
    const double contrast = 0.1 + 0.2 * rng.uniform();
    for (int y = top; y < std::min(height, top + h); ++y)
      for (int x = left; x < std::min(width, left + w); ++x) {
        const double phase = (std::cos(angle) * x + std::sin(angle) * y) * 2 * M_PI / period;
        img.at(y, x) += static_cast<float>(contrast * std::sin(phase));
      }
  }
  for (float& p : img.pixels) p = std::clamp(p, 0.02f, 0.98f);
  return img;
}

}  // namespace memnet
