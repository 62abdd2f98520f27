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

#ifndef MEMNET_FFT_HPP_
#define MEMNET_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace memnet {

bool is_power_of_two(std::size_t n);

// Forward DFT X[k] = sum_n x[n] exp(-2 pi i k n / N) in place. Iterative
// radix-2 when N is a power of two, direct O(N^2) summation otherwise.
void dft(std::span<std::complex<double>> data);

// Row-major 2-D forward DFT of a real h x w array.
std::vector<std::complex<double>> dft2d(std::span<const double> values, int h, int w);

}  // namespace memnet

#endif  // MEMNET_FFT_HPP_
