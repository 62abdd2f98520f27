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

#ifndef MEMNET_DATASET_HPP_
#define MEMNET_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "memnet/degrade.hpp"
#include "memnet/image.hpp"
#include "memnet/tensor.hpp"

namespace memnet {

struct PatchOffset {
  int y = 0;
  int x = 0;
  bool operator==(const PatchOffset&) const = default;
};

// Top-left corners (i * stride, j * stride) of every patch that fits.
std::vector<PatchOffset> extract_patches(const GrayImage& img, int size = 31,
                                         int stride = 21);

// The eight symmetries of the square. ids 0-3 rotate by 0/90/180/270 degrees
// counter-clockwise; ids 4-7 apply the same rotation followed by a left-right
// mirror.
GrayImage augment(const GrayImage& patch, int aug_id);

struct PatchProvenance {
  std::uint32_t image = 0;
  std::uint32_t spec = 0;
  PatchOffset offset;
  std::uint32_t augmentation = 0;
};

struct PatchPair {
  std::vector<float> degraded;
  std::vector<float> clean;
  PatchProvenance provenance;
};

struct PatchSet {
  int patch_size = 31;
  std::vector<PatchPair> pairs;

  std::size_t size() const { return pairs.size(); }
};

struct PatchConfig {
  int patch_size = 31;
  int stride = 21;
  int augmentations = 8;  // uses ids 0 .. augmentations-1
  std::uint64_t seed = 1;
};

// Degrades each whole image once per spec, then cuts aligned patch pairs and
// augments them. Order: image, spec, offset, augmentation.
PatchSet build_training_set(std::span<const GrayImage> images,
                            std::span<const DegradationSpec> specs,
                            const PatchConfig& config);

// Flat little-endian cache: "MPST", u32 version, u32 count, u32 patch size,
// then per pair the degraded and the clean patch as raw f32.
void save_patch_cache(const PatchSet& set, const std::filesystem::path& path);
PatchSet load_patch_cache(const std::filesystem::path& path);

// Stacks the chosen pairs into [B, 1, P, P] input and target tensors.
template <typename T>
std::pair<Tensor<T>, Tensor<T>> make_batch(const PatchSet& set,
                                           std::span<const std::size_t> indices);

}  // namespace memnet

#endif  // MEMNET_DATASET_HPP_
