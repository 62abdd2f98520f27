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

#include "memnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "memnet/error.hpp"
#include "memnet/fft.hpp"

namespace memnet {
namespace {

void require_same_dims(const GrayImage& a, const GrayImage& b, const char* what) {
  require(a.height == b.height && a.width == b.width, ErrorKind::kShape,
          std::string(what) + ": image dimensions differ");
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

GrayImage shaved(const GrayImage& img, int shave) {
  require(shave >= 0, ErrorKind::kValue, "shave must be >= 0");
  if (shave == 0) return img;
  require(img.height > 2 * shave && img.width > 2 * shave, ErrorKind::kValue,
          "shave removes the whole image");
  return img.crop(shave, shave, img.height - 2 * shave, img.width - 2 * shave);
}

// Valid-mode separable filter of a double image.
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int oh = h - n + 1;
  const int ow = w - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(oh) * w);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0;
      for (int t = 0; t < n; ++t) acc += k[t] * img[static_cast<std::size_t>(y + t) * w + x];
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0;
      for (int t = 0; t < n; ++t) acc += k[t] * tmp[static_cast<std::size_t>(y) * w + x + t];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double psnr(const GrayImage& a, const GrayImage& b, int shave) {
  require_same_dims(a, b, "psnr");
  const GrayImage sa = shaved(a, shave);
  const GrayImage sb = shaved(b, shave);
  double sq = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const double d = static_cast<double>(sa.pixels[i]) - sb.pixels[i];
    sq += d * d;
  }
  const double mse = sq / static_cast<double>(sa.size());
  if (mse == 0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const GrayImage& a, const GrayImage& b, int shave) {
  require_same_dims(a, b, "ssim");
  const GrayImage sa = shaved(a, shave);
  const GrayImage sb = shaved(b, shave);
  constexpr int kWindow = 11;
  constexpr double kSigma = 1.5;
  require(sa.height >= kWindow && sa.width >= kWindow, ErrorKind::kValue,
          "ssim: image smaller than the 11x11 window");
  std::vector<double> k(kWindow);
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2 * kSigma * kSigma));
  }
  const double total = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= total;

  const int h = sa.height, w = sa.width;
  const std::size_t n = sa.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = sa.pixels[i];
    y[i] = sb.pixels[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, h, w, k);
  const auto my = filter_valid(y, h, w, k);
  const auto sxx = filter_valid(xx, h, w, k);
  const auto syy = filter_valid(yy, h, w, k);
  const auto sxy = filter_valid(xy, h, w, k);
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  double acc = 0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    acc += ((2 * mx[i] * my[i] + c1) * (2 * cov + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(mx.size());
}

ImageMetrics MetricsReport::average() const {
  ImageMetrics avg;
  avg.name = "average";
  if (images.empty()) return avg;
  for (const ImageMetrics& m : images) {
    avg.psnr_degraded += m.psnr_degraded;
    avg.ssim_degraded += m.ssim_degraded;
    avg.psnr += m.psnr;
    avg.ssim += m.ssim;
  }
  const double n = static_cast<double>(images.size());
  avg.psnr_degraded /= n;
  avg.ssim_degraded /= n;
  avg.psnr /= n;
  avg.ssim /= n;
  return avg;
}

void MetricsReport::write_csv(std::ostream& out) const {
  out << "image,spec,shave,psnr_degraded,ssim_degraded,psnr,ssim\n";
  auto row = [&](const ImageMetrics& m) {
    out << m.name << ',' << spec << ',' << shave << ',' << fixed(m.psnr_degraded) << ','
        << fixed(m.ssim_degraded) << ',' << fixed(m.psnr) << ',' << fixed(m.ssim) << '\n';
  };
  for (const ImageMetrics& m : images) row(m);
  row(average());
}

std::vector<double> min_max_normalize(const std::vector<double>& v) {
  if (v.empty()) return {};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  std::vector<double> out(v.size(), 0.0);
  if (range <= 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  return out;
}

template <typename T>
std::vector<GateNorms> gate_weight_norms(const MemNetParams<T>& net) {
  const MemNetConfig& cfg = net.config;
  const int f = cfg.filters;
  std::vector<GateNorms> out;
  for (int m = 1; m <= cfg.blocks; ++m) {
    const Tensor<T>& w = net.blocks[static_cast<std::size_t>(m - 1)].gate.weight.value;
    const int outputs = w.shape().n;
    const int lm = w.shape().c;
    GateNorms g;
    g.block = m;
    g.raw.assign(static_cast<std::size_t>(lm), 0.0);
    const auto v = w.values();
    for (int i = 0; i < outputs; ++i)
      for (int l = 0; l < lm; ++l) {
        const double x = v[static_cast<std::size_t>(i) * lm + l];
        g.raw[static_cast<std::size_t>(l)] += x * x;
      }
    for (double& x : g.raw) x = std::sqrt(x);
    g.curve = min_max_normalize(g.raw);

    // Layout of the gate input, matching the concatenation order.
    const int short_maps = cfg.variant == Variant::kNoShortTerm ? 0 : (cfg.recursions - 1) * f;
    const int last_maps = f;
    const int long_maps = cfg.variant == Variant::kNoLongTerm ? 0 : m * f;
    require(short_maps + last_maps + long_maps == lm, ErrorKind::kShape,
            "gate weight does not match the configured variant");
    g.segment.reserve(static_cast<std::size_t>(lm));
    g.segment.insert(g.segment.end(), static_cast<std::size_t>(short_maps), "short");
    g.segment.insert(g.segment.end(), static_cast<std::size_t>(last_maps), "last");
    g.segment.insert(g.segment.end(), static_cast<std::size_t>(long_maps), "long");
    auto mean_of = [&](int begin, int count) -> std::optional<double> {
      if (count == 0) return std::nullopt;
      double s = 0;
      for (int l = begin; l < begin + count; ++l) s += g.curve[static_cast<std::size_t>(l)];
      return s / count;
    };
    g.short_term = mean_of(0, short_maps);
    g.last_recursion = mean_of(short_maps, last_maps);
    g.long_term = mean_of(short_maps + last_maps, long_maps);
    out.push_back(std::move(g));
  }
  return out;
}

SpectralDensity spectral_density(const GrayImage& img, int num_bins, const std::string& name) {
  require(img.height >= 8 && img.width >= 8, ErrorKind::kValue,
          "spectral density needs an image of at least 8x8");
  require(num_bins >= 1, ErrorKind::kValue, "need at least one bin");
  std::vector<double> values(img.pixels.begin(), img.pixels.end());
  const auto spectrum = dft2d(values, img.height, img.width);

  SpectralDensity d;
  d.image = name;
  d.edges.resize(static_cast<std::size_t>(num_bins) + 1);
  for (int i = 0; i <= num_bins; ++i) d.edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / num_bins;
  std::vector<double> total(static_cast<std::size_t>(num_bins), 0.0);
  d.count.assign(static_cast<std::size_t>(num_bins), 0);
  const double ny = img.height / 2.0;
  const double nx = img.width / 2.0;
  for (int u = 0; u < img.height; ++u) {
    const double fu = (u <= img.height / 2 ? u : u - img.height) / ny;
    for (int v = 0; v < img.width; ++v) {
      const double fv = (v <= img.width / 2 ? v : v - img.width) / nx;
      const double r = std::sqrt(fu * fu + fv * fv);
      const int bin = std::min(num_bins - 1, static_cast<int>(std::floor(r * num_bins)));
      total[static_cast<std::size_t>(bin)] += std::norm(spectrum[static_cast<std::size_t>(u) * img.width + v]);
      ++d.count[static_cast<std::size_t>(bin)];
    }
  }
  d.density.resize(static_cast<std::size_t>(num_bins));
  for (std::size_t b = 0; b < total.size(); ++b)
    d.density[b] = d.count[b] == 0 ? 0.0 : total[b] / static_cast<double>(d.count[b]);
  return d;
}

std::vector<double> density_difference(const SpectralDensity& d1, const SpectralDensity& d2) {
  require(d1.edges == d2.edges, ErrorKind::kShape,
          "density_difference: spectral densities use different binning");
  std::vector<double> out(d1.density.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = d1.density[i] - d2.density[i];
  return out;
}

void write_gate_norms_tsv(std::ostream& out, const std::vector<GateNorms>& norms) {
  out << "block\tindex\tsegment\tnorm\tnormalized\n";
  for (const GateNorms& g : norms)
    for (std::size_t l = 0; l < g.curve.size(); ++l)
      out << g.block << '\t' << l << '\t' << g.segment[l] << '\t' << fixed(g.raw[l], 8) << '\t'
          << fixed(g.curve[l], 8) << '\n';
}

void write_gate_bars_tsv(std::ostream& out, const std::vector<GateNorms>& norms) {
  auto cell = [](const std::optional<double>& v) { return v ? fixed(*v, 8) : std::string("NA"); };
  out << "block\tlong_term\tshort_term\tlast_recursion\n";
  for (const GateNorms& g : norms)
    out << g.block << '\t' << cell(g.long_term) << '\t' << cell(g.short_term) << '\t'
        << cell(g.last_recursion) << '\n';
}

void write_spectrum_tsv(std::ostream& out, const std::vector<SpectralDensity>& densities) {
  out << "image\tbin\tr_lo\tr_hi\tcount\tdensity\n";
  for (const SpectralDensity& d : densities)
    for (std::size_t b = 0; b < d.density.size(); ++b) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", d.density[b]);
      out << d.image << '\t' << b << '\t' << fixed(d.edges[b]) << '\t' << fixed(d.edges[b + 1])
          << '\t' << d.count[b] << '\t' << buf << '\n';
    }
}

template std::vector<GateNorms> gate_weight_norms<float>(const MemNetParams<float>&);
template std::vector<GateNorms> gate_weight_norms<double>(const MemNetParams<double>&);

}  // namespace memnet
