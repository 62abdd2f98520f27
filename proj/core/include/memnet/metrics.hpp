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

#ifndef MEMNET_METRICS_HPP_
#define MEMNET_METRICS_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "memnet/image.hpp"
#include "memnet/model.hpp"

namespace memnet {

// Returned for identical images instead of +inf.
inline constexpr double kPsnrCap = 100.0;

// 10 log10(1 / MSE) over the image minus `shave` border pixels per side.
double psnr(const GrayImage& a, const GrayImage& b, int shave = 0);

// Mean SSIM over all fully contained 11x11 Gaussian windows (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range 1.
double ssim(const GrayImage& a, const GrayImage& b, int shave = 0);

struct ImageMetrics {
  std::string name;
  double psnr_degraded = 0;
  double ssim_degraded = 0;
  double psnr = 0;
  double ssim = 0;
};

struct MetricsReport {
  std::string spec;
  int shave = 0;
  std::vector<ImageMetrics> images;

  // Arithmetic means over `images`.
  ImageMetrics average() const;
  // Header, one row per image, then an "average" row.
  void write_csv(std::ostream& out) const;
};

// Per-feature-map gate weight norms of one memory block.
struct GateNorms {
  int block = 0;                // 1-based
  std::vector<double> raw;      // sqrt(sum_i W[i, l]^2), l = 0 .. L_m-1
  std::vector<double> curve;    // raw min-max normalised to [0, 1]
  std::vector<std::string> segment;  // "short", "last" or "long" per entry
  // Means of `curve` over each memory group; empty when the variant feeds
  // no such maps to the gate.
  std::optional<double> long_term;
  std::optional<double> short_term;  // first R-1 recursions
  std::optional<double> last_recursion;
};

template <typename T>
std::vector<GateNorms> gate_weight_norms(const MemNetParams<T>& net);

// Min-max normalisation; a constant input maps to all zeros.
std::vector<double> min_max_normalize(const std::vector<double>& v);

struct SpectralDensity {
  std::string image;
  // bins + 1 edges of radial frequency as a fraction of Nyquist. The last
  // annulus also collects the corner frequencies beyond Nyquist, so every
  // DFT coefficient belongs to exactly one annulus.
  std::vector<double> edges;
  std::vector<double> density;  // mean power per annulus, 0 when empty
  std::vector<std::size_t> count;  // coefficients per annulus
};

// |DFT|^2 of the image, averaged over equal-width radial annuli.
SpectralDensity spectral_density(const GrayImage& img, int num_bins,
                                 const std::string& name = "");

// Per-annulus d1 - d2; binning must match.
std::vector<double> density_difference(const SpectralDensity& d1,
                                       const SpectralDensity& d2);

// Plot-ready TSV writers.
void write_gate_norms_tsv(std::ostream& out, const std::vector<GateNorms>& norms);
void write_gate_bars_tsv(std::ostream& out, const std::vector<GateNorms>& norms);
void write_spectrum_tsv(std::ostream& out, const std::vector<SpectralDensity>& densities);

}  // namespace memnet

#endif  // MEMNET_METRICS_HPP_
