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

#include "memnet/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "gemm.hpp"

namespace memnet {
namespace {

// Unfolds one sample [cin, h, w] into col[cin * k * k, h * w].
template <typename T>
void im2col(const T* in, int cin, int h, int w, int k, int pad, T* col) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  for (int c = 0; c < cin; ++c) {
    const T* plane = in + c * hw;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* row = col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * hw;
        const int dx = kx - pad;
        const int x_lo = std::max(0, -dx);
        const int x_hi = std::min(w, w - dx);
        for (int y = 0; y < h; ++y) {
          T* dst = row + static_cast<std::size_t>(y) * w;
          const int sy = y + ky - pad;
          if (sy < 0 || sy >= h || x_lo >= x_hi) {
            std::fill(dst, dst + w, T(0));
            continue;
          }
          std::fill(dst, dst + x_lo, T(0));
          std::memcpy(dst + x_lo, plane + static_cast<std::size_t>(sy) * w + x_lo + dx,
                      sizeof(T) * static_cast<std::size_t>(x_hi - x_lo));
          std::fill(dst + x_hi, dst + w, T(0));
        }
      }
    }
  }
}

// Adjoint of im2col: scatters col back into `in`, accumulating.
template <typename T>
void col2im(const T* col, int cin, int h, int w, int k, int pad, T* in) {
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  for (int c = 0; c < cin; ++c) {
    T* plane = in + c * hw;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* row = col + ((static_cast<std::size_t>(c) * k + ky) * k + kx) * hw;
        const int dx = kx - pad;
        const int x_lo = std::max(0, -dx);
        const int x_hi = std::min(w, w - dx);
        for (int y = 0; y < h; ++y) {
          const int sy = y + ky - pad;
          if (sy < 0 || sy >= h) continue;
          const T* src = row + static_cast<std::size_t>(y) * w;
          T* dst = plane + static_cast<std::size_t>(sy) * w + dx;
          for (int x = x_lo; x < x_hi; ++x) dst[x] += src[x];
        }
      }
    }
  }
}

void require_same_shape(const Shape& a, const Shape& b, const char* op) {
  require(a == b, ErrorKind::kShape,
          std::string(op) + ": shape mismatch " + a.str() + " vs " + b.str());
}

}  // namespace

template <typename T>
Tensor<T> conv2d(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& weight,
                 const Tensor<T>* bias, int pad) {
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  require(ws.h == ws.w && ws.h % 2 == 1, ErrorKind::kShape,
          "conv2d: kernel must be square with odd size, got " + ws.str());
  require(ws.c == is.c, ErrorKind::kShape,
          "conv2d: weight expects " + std::to_string(ws.c) +
              " input channels, input has " + std::to_string(is.c));
  require(pad == (ws.h - 1) / 2, ErrorKind::kValue,
          "conv2d: pad must be (k-1)/2 for same-size output");
  if (bias != nullptr)
    require(bias->numel() == static_cast<std::size_t>(ws.n), ErrorKind::kShape,
            "conv2d: bias length must equal output channels");

  const int k = ws.h;
  const std::size_t hw = is.plane();
  const std::size_t kdim = static_cast<std::size_t>(is.c) * k * k;
  const bool direct = (k == 1);
  Tensor<T> out(Shape{is.n, ws.n, is.h, is.w});

  std::vector<T> col(direct ? 0 : kdim * hw);
  const T* x = input.values().data();
  const T* wt = weight.values().data();
  T* y = out.mutable_values().data();
  for (int n = 0; n < is.n; ++n) {
    const T* xn = x + static_cast<std::size_t>(n) * is.c * hw;
    T* yn = y + static_cast<std::size_t>(n) * ws.n * hw;
    if (bias != nullptr) {
      const auto b = bias->values();
      for (int co = 0; co < ws.n; ++co) std::fill(yn + co * hw, yn + (co + 1) * hw, b[co]);
    }
    const T* src = xn;
    if (!direct) {
      im2col(xn, is.c, is.h, is.w, k, pad, col.data());
      src = col.data();
    }
    detail::gemm_nn<T>(ws.n, hw, kdim, wt, src, yn);
  }
  check_finite<T>(out.values(), "conv2d output");

  const Tensor<T> none;
  if (g.tracks({&input, &weight, bias})) {
    out.set_requires_grad(true);
    Tensor<T> b = bias != nullptr ? *bias : none;
    g.record(out, [input, weight, b, out, pad, k, hw, kdim, direct]() mutable {
      const Shape& is = input.shape();
      const Shape& ws = weight.shape();
      const T* dy = out.grad().data();
      const T* x = input.values().data();
      std::vector<T> col(direct ? 0 : kdim * hw);
      std::vector<T> dcol(direct ? 0 : kdim * hw);
      T* dw = weight.requires_grad() ? weight.grad().data() : nullptr;
      T* dx = input.requires_grad() ? input.grad().data() : nullptr;
      T* db = (b.defined() && b.requires_grad()) ? b.grad().data() : nullptr;
      for (int n = 0; n < is.n; ++n) {
        const T* dyn = dy + static_cast<std::size_t>(n) * ws.n * hw;
        const T* xn = x + static_cast<std::size_t>(n) * is.c * hw;
        if (db != nullptr) {
          for (int co = 0; co < ws.n; ++co) {
            T s = 0;
            const T* row = dyn + co * hw;
            for (std::size_t j = 0; j < hw; ++j) s += row[j];
            db[co] += s;
          }
        }
        if (dw != nullptr) {
          const T* src = xn;
          if (!direct) {
            im2col(xn, is.c, is.h, is.w, k, pad, col.data());
            src = col.data();
          }
          detail::gemm_nt<T>(ws.n, hw, kdim, dyn, src, dw);
        }
        if (dx != nullptr) {
          T* dxn = dx + static_cast<std::size_t>(n) * is.c * hw;
          if (direct) {
            detail::gemm_tn<T>(ws.n, hw, kdim, weight.values().data(), dyn, dxn);
          } else {
            std::fill(dcol.begin(), dcol.end(), T(0));
            detail::gemm_tn<T>(ws.n, hw, kdim, weight.values().data(), dyn, dcol.data());
            col2im(dcol.data(), is.c, is.h, is.w, k, pad, dxn);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> batchnorm(Graph<T>& g, const Tensor<T>& input, const Tensor<T>& gamma,
                    const Tensor<T>& beta, RunningStats<T>& stats, Mode mode,
                    double eps, double momentum) {
  const Shape& s = input.shape();
  const std::size_t channels = static_cast<std::size_t>(s.c);
  require(gamma.numel() == channels && beta.numel() == channels, ErrorKind::kShape,
          "batchnorm: gamma/beta length must equal input channels " +
              std::to_string(s.c));
  require(stats.mean.size() == channels && stats.var.size() == channels,
          ErrorKind::kShape, "batchnorm: running stats have wrong channel count");
  require(eps > 0, ErrorKind::kValue, "batchnorm: eps must be positive");

  const std::size_t hw = s.plane();
  const std::size_t count = static_cast<std::size_t>(s.n) * hw;
  const T* x = input.values().data();
  std::vector<T> mean(channels), inv_std(channels);

  if (mode == Mode::kTrain) {
    for (std::size_t c = 0; c < channels; ++c) {
      double acc = 0;
      for (int n = 0; n < s.n; ++n) {
        const T* p = x + (static_cast<std::size_t>(n) * channels + c) * hw;
        for (std::size_t j = 0; j < hw; ++j) acc += p[j];
      }
      const double mu = acc / static_cast<double>(count);
      double sq = 0;
      for (int n = 0; n < s.n; ++n) {
        const T* p = x + (static_cast<std::size_t>(n) * channels + c) * hw;
        for (std::size_t j = 0; j < hw; ++j) {
          const double d = p[j] - mu;
          sq += d * d;
        }
      }
      const double var = sq / static_cast<double>(count);
      mean[c] = static_cast<T>(mu);
      inv_std[c] = static_cast<T>(1.0 / std::sqrt(var + eps));
      const double unbiased = count > 1 ? sq / static_cast<double>(count - 1) : var;
      stats.mean[c] = static_cast<T>(momentum * stats.mean[c] + (1 - momentum) * mu);
      stats.var[c] = static_cast<T>(momentum * stats.var[c] + (1 - momentum) * unbiased);
    }
  } else {
    for (std::size_t c = 0; c < channels; ++c) {
      mean[c] = stats.mean[c];
      inv_std[c] = static_cast<T>(1.0 / std::sqrt(static_cast<double>(stats.var[c]) + eps));
    }
  }

  Tensor<T> out(s);
  T* y = out.mutable_values().data();
  const T* gm = gamma.values().data();
  const T* bt = beta.values().data();
  for (int n = 0; n < s.n; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t off = (static_cast<std::size_t>(n) * channels + c) * hw;
      const T a = gm[c] * inv_std[c];
      const T b = bt[c] - mean[c] * a;
      for (std::size_t j = 0; j < hw; ++j) y[off + j] = x[off + j] * a + b;
    }
  }

  if (g.tracks({&input, &gamma, &beta})) {
    out.set_requires_grad(true);
    g.record(out, [input, gamma, beta, out, mean = std::move(mean),
                   inv_std = std::move(inv_std), mode, hw, count]() mutable {
      const Shape& s = input.shape();
      const std::size_t channels = static_cast<std::size_t>(s.c);
      const T* dy = out.grad().data();
      const T* x = input.values().data();
      const T* gm = gamma.values().data();
      T* dx = input.requires_grad() ? input.grad().data() : nullptr;
      T* dg = gamma.requires_grad() ? gamma.grad().data() : nullptr;
      T* dbt = beta.requires_grad() ? beta.grad().data() : nullptr;
      for (std::size_t c = 0; c < channels; ++c) {
        double sum_dy = 0, sum_dy_xhat = 0;
        for (int n = 0; n < s.n; ++n) {
          const std::size_t off = (static_cast<std::size_t>(n) * channels + c) * hw;
          for (std::size_t j = 0; j < hw; ++j) {
            const double xhat = (x[off + j] - mean[c]) * inv_std[c];
            sum_dy += dy[off + j];
            sum_dy_xhat += dy[off + j] * xhat;
          }
        }
        if (dg != nullptr) dg[c] += static_cast<T>(sum_dy_xhat);
        if (dbt != nullptr) dbt[c] += static_cast<T>(sum_dy);
        if (dx == nullptr) continue;
        const T a = gm[c] * inv_std[c];
        if (mode == Mode::kEval) {
          for (int n = 0; n < s.n; ++n) {
            const std::size_t off = (static_cast<std::size_t>(n) * channels + c) * hw;
            for (std::size_t j = 0; j < hw; ++j) dx[off + j] += a * dy[off + j];
          }
          continue;
        }
        const T mean_dy = static_cast<T>(sum_dy / static_cast<double>(count));
        const T mean_dy_xhat = static_cast<T>(sum_dy_xhat / static_cast<double>(count));
        for (int n = 0; n < s.n; ++n) {
          const std::size_t off = (static_cast<std::size_t>(n) * channels + c) * hw;
          for (std::size_t j = 0; j < hw; ++j) {
            const T xhat = (x[off + j] - mean[c]) * inv_std[c];
            dx[off + j] += a * (dy[off + j] - mean_dy - xhat * mean_dy_xhat);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> relu(Graph<T>& g, const Tensor<T>& input) {
  Tensor<T> out(input.shape());
  const auto x = input.values();
  auto y = out.mutable_values();
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > T(0) ? x[i] : T(0);
  if (g.tracks({&input})) {
    out.set_requires_grad(true);
    g.record(out, [input, out]() mutable {
      const auto x = input.values();
      const auto dy = out.grad();
      auto dx = input.grad();
      for (std::size_t i = 0; i < x.size(); ++i)
        dx[i] += x[i] > T(0) ? dy[i] : T(0);
    });
  }
  return out;
}

template <typename T>
Tensor<T> add(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a.shape(), b.shape(), "add");
  Tensor<T> out(a.shape());
  const auto x = a.values();
  const auto z = b.values();
  auto y = out.mutable_values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + z[i];
  if (g.tracks({&a, &b})) {
    out.set_requires_grad(true);
    g.record(out, [a, b, out]() mutable {
      const auto dy = out.grad();
      if (a.requires_grad()) {
        auto da = a.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> mul(Graph<T>& g, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a.shape(), b.shape(), "mul");
  Tensor<T> out(a.shape());
  const auto x = a.values();
  const auto z = b.values();
  auto y = out.mutable_values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * z[i];
  if (g.tracks({&a, &b})) {
    out.set_requires_grad(true);
    g.record(out, [a, b, out]() mutable {
      const auto dy = out.grad();
      if (a.requires_grad()) {
        auto da = a.grad();
        const auto z = b.values();
        for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * z[i];
      }
      if (b.requires_grad()) {
        auto db = b.grad();
        const auto x = a.values();
        for (std::size_t i = 0; i < dy.size(); ++i) db[i] += dy[i] * x[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(Graph<T>& g, const Tensor<T>& a, T factor) {
  Tensor<T> out(a.shape());
  const auto x = a.values();
  auto y = out.mutable_values();
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * factor;
  if (g.tracks({&a})) {
    out.set_requires_grad(true);
    g.record(out, [a, out, factor]() mutable {
      const auto dy = out.grad();
      auto da = a.grad();
      for (std::size_t i = 0; i < dy.size(); ++i) da[i] += dy[i] * factor;
    });
  }
  return out;
}

template <typename T>
Tensor<T> sum(Graph<T>& g, const Tensor<T>& a) {
  double acc = 0;
  for (T v : a.values()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(static_cast<T>(acc));
  if (g.tracks({&a})) {
    out.set_requires_grad(true);
    g.record(out, [a, out]() mutable {
      const T d = out.grad()[0];
      for (T& v : a.grad()) v += d;
    });
  }
  return out;
}

template <typename T>
Tensor<T> concat_channels(Graph<T>& g, std::span<const Tensor<T>> parts) {
  require(!parts.empty(), ErrorKind::kShape, "concat_channels: no inputs");
  const Shape& first = parts.front().shape();
  int channels = 0;
  for (const Tensor<T>& p : parts) {
    const Shape& s = p.shape();
    require(s.n == first.n && s.h == first.h && s.w == first.w, ErrorKind::kShape,
            "concat_channels: batch/spatial mismatch " + s.str() + " vs " + first.str());
    channels += s.c;
  }
  const std::size_t hw = first.plane();
  Tensor<T> out(Shape{first.n, channels, first.h, first.w});
  T* y = out.mutable_values().data();
  for (int n = 0; n < first.n; ++n) {
    T* dst = y + static_cast<std::size_t>(n) * channels * hw;
    for (const Tensor<T>& p : parts) {
      const std::size_t len = static_cast<std::size_t>(p.shape().c) * hw;
      const T* src = p.values().data() + static_cast<std::size_t>(n) * len;
      std::copy(src, src + len, dst);
      dst += len;
    }
  }
  if (g.tracks(parts)) {
    out.set_requires_grad(true);
    std::vector<Tensor<T>> inputs(parts.begin(), parts.end());
    g.record(out, [inputs = std::move(inputs), out, channels, hw]() mutable {
      const T* dy = out.grad().data();
      const int batch = out.shape().n;
      for (int n = 0; n < batch; ++n) {
        const T* src = dy + static_cast<std::size_t>(n) * channels * hw;
        for (Tensor<T>& p : inputs) {
          const std::size_t len = static_cast<std::size_t>(p.shape().c) * hw;
          if (p.requires_grad()) {
            T* dst = p.grad().data() + static_cast<std::size_t>(n) * len;
            for (std::size_t i = 0; i < len; ++i) dst[i] += src[i];
          }
          src += len;
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> mse_half(Graph<T>& g, const Tensor<T>& pred, const Tensor<T>& target,
                   double scale) {
  require_same_shape(pred.shape(), target.shape(), "mse_half");
  const auto p = pred.values();
  const auto t = target.values();
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(p[i]) - t[i];
    acc += d * d;
  }
  const double loss = scale * acc;
  require(std::isfinite(loss), ErrorKind::kNumeric, "mse_half: non-finite loss");
  Tensor<T> out = Tensor<T>::scalar(static_cast<T>(loss));
  if (g.tracks({&pred})) {
    out.set_requires_grad(true);
    g.record(out, [pred, target, out, scale]() mutable {
      const T d = out.grad()[0];
      const T factor = static_cast<T>(2.0 * scale) * d;
      const auto p = pred.values();
      const auto t = target.values();
      auto dp = pred.grad();
      for (std::size_t i = 0; i < p.size(); ++i) dp[i] += factor * (p[i] - t[i]);
    });
  }
  return out;
}

template <typename T>
Tensor<T> weighted_sum(Graph<T>& g, std::span<const Tensor<T>> parts,
                       const Tensor<T>& weights) {
  require(!parts.empty(), ErrorKind::kShape, "weighted_sum: no inputs");
  require(weights.numel() == parts.size(), ErrorKind::kShape,
          "weighted_sum: need one weight per input");
  const Shape& s = parts.front().shape();
  for (const Tensor<T>& p : parts) require_same_shape(p.shape(), s, "weighted_sum");
  Tensor<T> out(s);
  auto y = out.mutable_values();
  const auto w = weights.values();
  for (std::size_t m = 0; m < parts.size(); ++m) {
    const auto x = parts[m].values();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += w[m] * x[i];
  }
  if (g.tracks(parts) || g.tracks({&weights})) {
    out.set_requires_grad(true);
    std::vector<Tensor<T>> inputs(parts.begin(), parts.end());
    g.record(out, [inputs = std::move(inputs), weights, out]() mutable {
      const auto dy = out.grad();
      const auto w = weights.values();
      for (std::size_t m = 0; m < inputs.size(); ++m) {
        const auto x = inputs[m].values();
        if (weights.requires_grad()) {
          double acc = 0;
          for (std::size_t i = 0; i < dy.size(); ++i) acc += static_cast<double>(dy[i]) * x[i];
          weights.grad()[m] += static_cast<T>(acc);
        }
        if (inputs[m].requires_grad()) {
          auto dx = inputs[m].grad();
          for (std::size_t i = 0; i < dy.size(); ++i) dx[i] += w[m] * dy[i];
        }
      }
    });
  }
  return out;
}

#define MEMNET_INSTANTIATE_OPS(T)                                               \
  template Tensor<T> conv2d<T>(Graph<T>&, const Tensor<T>&, const Tensor<T>&,    \
                               const Tensor<T>*, int);                           \
  template Tensor<T> batchnorm<T>(Graph<T>&, const Tensor<T>&, const Tensor<T>&, \
                                  const Tensor<T>&, RunningStats<T>&, Mode,      \
                                  double, double);                               \
  template Tensor<T> relu<T>(Graph<T>&, const Tensor<T>&);                       \
  template Tensor<T> add<T>(Graph<T>&, const Tensor<T>&, const Tensor<T>&);      \
  template Tensor<T> mul<T>(Graph<T>&, const Tensor<T>&, const Tensor<T>&);      \
  template Tensor<T> scale<T>(Graph<T>&, const Tensor<T>&, T);                   \
  template Tensor<T> sum<T>(Graph<T>&, const Tensor<T>&);                        \
  template Tensor<T> concat_channels<T>(Graph<T>&, std::span<const Tensor<T>>);  \
  template Tensor<T> mse_half<T>(Graph<T>&, const Tensor<T>&, const Tensor<T>&,  \
                                 double);                                        \
  template Tensor<T> weighted_sum<T>(Graph<T>&, std::span<const Tensor<T>>,      \
                                     const Tensor<T>&);

MEMNET_INSTANTIATE_OPS(float)
MEMNET_INSTANTIATE_OPS(double)

#undef MEMNET_INSTANTIATE_OPS

}  // namespace memnet
