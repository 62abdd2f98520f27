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

#include "memnet/degrade.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include "memnet/error.hpp"
#include "memnet/rng.hpp"

namespace memnet {

std::string to_string(const DegradationSpec& spec) {
  struct Visitor {
    std::string operator()(const Denoise& d) const {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d.sigma);
      return "denoise:" + std::string(buf, end);
    }
    std::string operator()(const SuperResolve& s) const {
      return "sr:" + std::to_string(s.scale);
    }
    std::string operator()(const Jpeg& j) const {
      return "jpeg:" + std::to_string(j.quality);
    }
  };
  return std::visit(Visitor{}, spec);
}

DegradationSpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, ErrorKind::kConfig,
          "degradation spec must look like kind:level, got '" + std::string(text) + "'");
  const std::string_view kind = text.substr(0, colon);
  const std::string_view level = text.substr(colon + 1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(level.data(), level.data() + level.size(), value);
  require(ec == std::errc() && ptr == level.data() + level.size(), ErrorKind::kConfig,
          "bad degradation level '" + std::string(level) + "'");
  if (kind == "denoise") {
    require(value >= 0, ErrorKind::kConfig, "noise sigma must be >= 0");
    return Denoise{value};
  }
  const int as_int = static_cast<int>(value);
  require(as_int == value, ErrorKind::kConfig, "level must be an integer for " +
                                                   std::string(kind));
  if (kind == "sr") {
    require(as_int >= 2 && as_int <= 4, ErrorKind::kConfig, "SR scale must be 2, 3 or 4");
    return SuperResolve{as_int};
  }
  if (kind == "jpeg") {
    require(as_int >= 1 && as_int <= 100, ErrorKind::kConfig,
            "JPEG quality must lie in [1, 100]");
    return Jpeg{as_int};
  }
  fail(ErrorKind::kConfig, "unknown degradation kind '" + std::string(kind) + "'");
}

int default_shave(const DegradationSpec& spec) {
  if (const auto* sr = std::get_if<SuperResolve>(&spec)) return sr->scale;
  return 0;
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma_255,
                             std::uint64_t seed) {
  require(sigma_255 >= 0, ErrorKind::kValue, "noise sigma must be >= 0");
  if (sigma_255 == 0) return img;
  Rng rng(seed);
  const double sigma = sigma_255 / 255.0;
  GrayImage out = img;
  for (float& p : out.pixels)
    p = std::clamp(static_cast<float>(p + sigma * rng.normal()), 0.0f, 1.0f);
  return out;
}

double cubic_kernel(double x) {
  const double ax = std::abs(x);
  const double ax2 = ax * ax;
  const double ax3 = ax2 * ax;
  if (ax <= 1) return 1.5 * ax3 - 2.5 * ax2 + 1;
  if (ax < 2) return -0.5 * ax3 + 2.5 * ax2 - 4 * ax + 2;
  return 0;
}

namespace {

struct Contribution {
  std::vector<int> index;
  std::vector<double> weight;
};

std::vector<Contribution> contributions(int in_len, int out_len, bool antialias) {
  const double scale = static_cast<double>(out_len) / in_len;
  const bool widen = antialias && scale < 1;
  const double width = widen ? 4.0 / scale : 4.0;
  std::vector<Contribution> out(static_cast<std::size_t>(out_len));
  for (int u = 1; u <= out_len; ++u) {
    const double x = u / scale + 0.5 * (1 - 1 / scale);
    const int left = static_cast<int>(std::floor(x - width / 2));
    const int taps = static_cast<int>(std::ceil(width)) + 2;
    Contribution& c = out[static_cast<std::size_t>(u - 1)];
    double total = 0;
    for (int t = 0; t < taps; ++t) {
      const int idx = left + t;
      const double d = x - idx;
      const double w = widen ? scale * cubic_kernel(scale * d) : cubic_kernel(d);
      if (w == 0) continue;
      // Symmetric extension of 1-based index into [1, in_len].
      int m = (idx - 1) % (2 * in_len);
      if (m < 0) m += 2 * in_len;
      const int src = m < in_len ? m : 2 * in_len - 1 - m;
      c.index.push_back(src);
      c.weight.push_back(w);
      total += w;
    }
    for (double& w : c.weight) w /= total;
  }
  return out;
}

}  // namespace

GrayImage bicubic_resize(const GrayImage& img, int out_h, int out_w, bool antialias) {
  require(out_h >= 1 && out_w >= 1, ErrorKind::kValue, "resize target must be >= 1");
  const auto rows = contributions(img.height, out_h, antialias);
  const auto cols = contributions(img.width, out_w, antialias);

  std::vector<double> tmp(static_cast<std::size_t>(out_h) * img.width);
  for (int y = 0; y < out_h; ++y) {
    const Contribution& c = rows[static_cast<std::size_t>(y)];
    for (int x = 0; x < img.width; ++x) {
      double acc = 0;
      for (std::size_t t = 0; t < c.index.size(); ++t) acc += c.weight[t] * img.at(c.index[t], x);
      tmp[static_cast<std::size_t>(y) * img.width + x] = acc;
    }
  }
  GrayImage out(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const double* row = tmp.data() + static_cast<std::size_t>(y) * img.width;
    for (int x = 0; x < out_w; ++x) {
      const Contribution& c = cols[static_cast<std::size_t>(x)];
      double acc = 0;
      for (std::size_t t = 0; t < c.index.size(); ++t) acc += c.weight[t] * row[c.index[t]];
      out.at(y, x) = static_cast<float>(std::clamp(acc, 0.0, 1.0));
    }
  }
  return out;
}

GrayImage crop_to_multiple(const GrayImage& img, int scale) {
  require(scale >= 1, ErrorKind::kValue, "scale must be >= 1");
  const int h = img.height - img.height % scale;
  const int w = img.width - img.width % scale;
  require(h >= scale && w >= scale, ErrorKind::kValue, "image smaller than the SR scale");
  return img.crop(0, 0, h, w);
}

GrayImage degrade_sr(const GrayImage& img, int scale) {
  const GrayImage hr = crop_to_multiple(img, scale);
  const GrayImage lr = bicubic_resize(hr, hr.height / scale, hr.width / scale, true);
  return bicubic_resize(lr, hr.height, hr.width, true);
}

const std::array<int, 64> kJpegLuminanceTable = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

std::array<int, 64> jpeg_quant_table(int quality) {
  require(quality >= 1 && quality <= 100, ErrorKind::kValue,
          "JPEG quality must lie in [1, 100]");
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  std::array<int, 64> table{};
  for (std::size_t i = 0; i < 64; ++i)
    table[i] = std::clamp((kJpegLuminanceTable[i] * scale + 50) / 100, 1, 255);
  return table;
}

GrayImage jpeg_degrade(const GrayImage& img, int quality) {
  const std::array<int, 64> q = jpeg_quant_table(quality);
  double basis[8][8];
  for (int u = 0; u < 8; ++u)
    for (int x = 0; x < 8; ++x)
      basis[u][x] = (u == 0 ? std::sqrt(0.125) : 0.5) * std::cos((2 * x + 1) * u * M_PI / 16);

  GrayImage out(img.height, img.width);
  double block[8][8], tmp[8][8], coef[8][8];
  for (int by = 0; by < img.height; by += 8) {
    for (int bx = 0; bx < img.width; bx += 8) {
      for (int y = 0; y < 8; ++y) {
        const int sy = std::min(by + y, img.height - 1);
        for (int x = 0; x < 8; ++x) {
          const int sx = std::min(bx + x, img.width - 1);
          const float p = std::clamp(img.at(sy, sx), 0.0f, 1.0f);
          block[y][x] = static_cast<double>(std::lround(p * 255.0f)) - 128.0;
        }
      }
      // coef = B * block * B^T
      for (int u = 0; u < 8; ++u)
        for (int x = 0; x < 8; ++x) {
          double acc = 0;
          for (int y = 0; y < 8; ++y) acc += basis[u][y] * block[y][x];
          tmp[u][x] = acc;
        }
      for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
          double acc = 0;
          for (int x = 0; x < 8; ++x) acc += tmp[u][x] * basis[v][x];
          const double step = q[static_cast<std::size_t>(u * 8 + v)];
          coef[u][v] = std::round(acc / step) * step;
        }
      // block = B^T * coef * B
      for (int y = 0; y < 8; ++y)
        for (int v = 0; v < 8; ++v) {
          double acc = 0;
          for (int u = 0; u < 8; ++u) acc += basis[u][y] * coef[u][v];
          tmp[y][v] = acc;
        }
      for (int y = 0; y < 8 && by + y < img.height; ++y)
        for (int x = 0; x < 8 && bx + x < img.width; ++x) {
          double acc = 0;
          for (int v = 0; v < 8; ++v) acc += tmp[y][v] * basis[v][x];
          const double level = std::clamp(std::round(acc + 128.0), 0.0, 255.0);
          out.at(by + y, bx + x) = static_cast<float>(level / 255.0);
        }
    }
  }
  return out;
}

GrayImage degrade(const GrayImage& img, const DegradationSpec& spec,
                  std::uint64_t seed) {
  struct Visitor {
    const GrayImage& img;
    std::uint64_t seed;
    GrayImage operator()(const Denoise& d) const {
      return add_gaussian_noise(img, d.sigma, seed);
    }
    GrayImage operator()(const SuperResolve& s) const { return degrade_sr(img, s.scale); }
    GrayImage operator()(const Jpeg& j) const { return jpeg_degrade(img, j.quality); }
  };
  return std::visit(Visitor{img, seed}, spec);
}

GrayImage reference_for(const GrayImage& clean, const DegradationSpec& spec) {
  if (const auto* sr = std::get_if<SuperResolve>(&spec))
    return crop_to_multiple(clean, sr->scale);
  return clean;
}

}  // namespace memnet
