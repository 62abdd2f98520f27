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

// Row-major GEMM kernels used by the convolution. All three accumulate into
// C and use a fixed reduction order, so results do not depend on anything
// but the operands.
#ifndef MEMNET_SRC_GEMM_HPP_
#define MEMNET_SRC_GEMM_HPP_

#include <cstddef>
#include <vector>

namespace memnet::detail {

// C[m x n] += A[m x k] * B[k x n]. Register tile of 4 rows x 32 columns.
template <typename T>
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  constexpr std::size_t kR = 4, kC = 32;
  std::size_t i = 0;
  for (; i + kR <= m; i += kR) {
    std::size_t j = 0;
    for (; j + kC <= n; j += kC) {
      T acc[kR][kC] = {};
      for (std::size_t p = 0; p < k; ++p) {
        const T* bp = b + p * n + j;
        for (std::size_t r = 0; r < kR; ++r) {
          const T av = a[(i + r) * k + p];
          for (std::size_t l = 0; l < kC; ++l) acc[r][l] += av * bp[l];
        }
      }
      for (std::size_t r = 0; r < kR; ++r)
        for (std::size_t l = 0; l < kC; ++l) c[(i + r) * n + j + l] += acc[r][l];
    }
    for (; j < n; ++j)
      for (std::size_t r = 0; r < kR; ++r) {
        T s = 0;
        for (std::size_t p = 0; p < k; ++p) s += a[(i + r) * k + p] * b[p * n + j];
        c[(i + r) * n + j] += s;
      }
  }
  for (; i < m; ++i) {
    std::size_t j = 0;
    for (; j + kC <= n; j += kC) {
      T acc[kC] = {};
      for (std::size_t p = 0; p < k; ++p) {
        const T av = a[i * k + p];
        const T* bp = b + p * n + j;
        for (std::size_t l = 0; l < kC; ++l) acc[l] += av * bp[l];
      }
      for (std::size_t l = 0; l < kC; ++l) c[i * n + j + l] += acc[l];
    }
    for (; j < n; ++j) {
      T s = 0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      c[i * n + j] += s;
    }
  }
}
// C[m x k] += A[m x n] * B[k x n]^T as blocked dot products.
template <typename T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  constexpr std::size_t kR = 2, kQ = 4, kL = 16;
  auto tail = [&](std::size_t i, std::size_t p) {
    const T* ai = a + i * n; const T* bp = b + p * n;
    T acc[kL] = {};
    std::size_t j = 0;
    for (; j + kL <= n; j += kL)
      for (std::size_t l = 0; l < kL; ++l) acc[l] += ai[j + l] * bp[j + l];
    T s = 0;
    for (std::size_t l = 0; l < kL; ++l) s += acc[l];
    for (; j < n; ++j) s += ai[j] * bp[j];
    c[i * k + p] += s;
  };
  std::size_t i = 0;
  for (; i + kR <= m; i += kR) {
    std::size_t p = 0;
    for (; p + kQ <= k; p += kQ) {
      T acc[kR][kQ][kL] = {};
      std::size_t j = 0;
      for (; j + kL <= n; j += kL)
        for (std::size_t r = 0; r < kR; ++r)
          for (std::size_t q = 0; q < kQ; ++q)
            for (std::size_t l = 0; l < kL; ++l)
              acc[r][q][l] += a[(i + r) * n + j + l] * b[(p + q) * n + j + l];
      for (std::size_t r = 0; r < kR; ++r)
        for (std::size_t q = 0; q < kQ; ++q) {
          T s = 0;
          for (std::size_t l = 0; l < kL; ++l) s += acc[r][q][l];
          for (std::size_t jj = j; jj < n; ++jj) s += a[(i + r) * n + jj] * b[(p + q) * n + jj];
          c[(i + r) * k + p + q] += s;
        }
    }
    for (; p < k; ++p) for (std::size_t r = 0; r < kR; ++r) tail(i + r, p);
  }
  for (; i < m; ++i) for (std::size_t p = 0; p < k; ++p) tail(i, p);
}
// C[k x n] += A[m x k]^T * B[m x n]
template <typename T>
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const T* a,
             const T* b, T* c) {
  std::vector<T> at(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) at[p * m + i] = a[i * k + p];
  gemm_nn<T>(k, n, m, at.data(), b, c);
}

}  // namespace memnet::detail

#endif  // MEMNET_SRC_GEMM_HPP_
