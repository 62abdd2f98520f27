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

#ifndef MEMNET_CHECKPOINT_HPP_
#define MEMNET_CHECKPOINT_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "memnet/model.hpp"

namespace memnet {

// MEMN checkpoint, version 1, little-endian:
//
//   "MEMN"  u32 version
//   u32 M, u32 R, u32 F, u32 variant, u32 multi_supervised, f64 alpha
//   u32 epoch                       (completed epochs)
//   u32 parameter_count
//   per parameter, canonical order (MemNetParams::parameters()):
//     u32 kind, u32 n, u32 c, u32 h, u32 w,
//     f32[n*c*h*w] value, f32[n*c*h*w] momentum
//   u32 batchnorm_count
//   per batch-norm layer (MemNetParams::batchnorms() order):
//     u32 channels, f32[channels] running_mean, f32[channels] running_var
//
// The stored alpha is the resolved value (1 / (M + 1) when not configured).
struct Checkpoint {
  MemNetParams<float> net;
  int epoch = 0;
};

std::string encode_checkpoint(MemNetParams<float>& net, int epoch);
Checkpoint decode_checkpoint(const std::string& bytes, const std::string& source = "checkpoint");

void save_checkpoint(MemNetParams<float>& net, int epoch, const std::filesystem::path& path);

// When `expected` is given, the stored architecture must match it.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<MemNetConfig>& expected = std::nullopt);

}  // namespace memnet

#endif  // MEMNET_CHECKPOINT_HPP_
