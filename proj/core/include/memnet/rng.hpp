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

#ifndef MEMNET_RNG_HPP_
#define MEMNET_RNG_HPP_

#include <cstdint>
#include <random>

namespace memnet {

// Stream identifiers for seed derivation. Every random decision in the
// library draws from Rng(derive_seed(run_seed, stream, index)), so two runs
// with the same seed agree bit for bit and a resumed run can re-create the
// generator of any epoch without stored state.
enum class Stream : std::uint64_t {
  kInit = 1,       // index: parameter ordinal
  kShuffle = 2,    // index: epoch
  kNoise = 3,      // index: image_ordinal * 1024 + spec_ordinal
  kEvalNoise = 4,  // index: test image ordinal
  kSynth = 5,      // index: synthetic image ordinal
  kTest = 99,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, Stream stream,
                                    std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)) ^ index);
}

// mt19937_64 with portable uniform and normal draws (the <random>
// distributions are implementation-defined, these are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound > 0. Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % bound;
  }

  // Standard normal via the Box-Muller transform; the second variate of each
  // pair is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace memnet

#endif  // MEMNET_RNG_HPP_
