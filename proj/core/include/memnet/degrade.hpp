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

#ifndef MEMNET_DEGRADE_HPP_
#define MEMNET_DEGRADE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "memnet/image.hpp"

namespace memnet {

struct Denoise {
  double sigma = 30;  // on the 0..255 scale
  bool operator==(const Denoise&) const = default;
};
struct SuperResolve {
  int scale = 2;
  bool operator==(const SuperResolve&) const = default;
};
struct Jpeg {
  int quality = 10;
  bool operator==(const Jpeg&) const = default;
};

using DegradationSpec = std::variant<Denoise, SuperResolve, Jpeg>;

// "denoise:30", "sr:3", "jpeg:10".
std::string to_string(const DegradationSpec& spec);
DegradationSpec parse_spec(std::string_view text);

// Border pixels excluded from PSNR/SSIM by default: the scale for SR, zero
// otherwise.
int default_shave(const DegradationSpec& spec);

// Adds i.i.d. N(0, (sigma/255)^2) noise and clamps to [0, 1].
GrayImage add_gaussian_noise(const GrayImage& img, double sigma_255,
                             std::uint64_t seed);

// Keys cubic convolution kernel, a = -0.5.
double cubic_kernel(double x);

// Separable bicubic resampling with symmetric border handling. Output pixel
// centres map to input coordinates as u / s + 0.5 * (1 - 1 / s) (1-based,
// s = out / in per axis). When shrinking with `antialias`, the kernel is
// widened by 1 / s. Contribution weights are normalised to sum to one and
// the result is clamped.
GrayImage bicubic_resize(const GrayImage& img, int out_h, int out_w,
                         bool antialias = true);

// Crops to multiples of `scale`, then bicubic down by `scale` and back up.
GrayImage crop_to_multiple(const GrayImage& img, int scale);
GrayImage degrade_sr(const GrayImage& img, int scale);

// Standard JPEG luminance quantisation table (row-major, natural order).
extern const std::array<int, 64> kJpegLuminanceTable;

// Table for a quality factor in [1, 100] using the IJG scaling.
std::array<int, 64> jpeg_quant_table(int quality);

// Grayscale baseline JPEG round trip in the pixel domain: 8x8 DCT-II on
// level-shifted 8-bit samples, quantise/dequantise, inverse DCT, round and
// clamp to 8 bits. Partial edge blocks are padded by replication.
GrayImage jpeg_degrade(const GrayImage& img, int quality);

// Applies a spec. SR output has the cropped dimensions; pair it with
// crop_to_multiple(clean, scale).
GrayImage degrade(const GrayImage& img, const DegradationSpec& spec,
                  std::uint64_t seed);

// Reference image a degraded output is compared against (the SR crop).
GrayImage reference_for(const GrayImage& clean, const DegradationSpec& spec);

}  // namespace memnet

#endif  // MEMNET_DEGRADE_HPP_
