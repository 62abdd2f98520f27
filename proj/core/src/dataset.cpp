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

#include "memnet/dataset.hpp"

#include <fstream>

#include "memnet/binary_io.hpp"
#include "memnet/error.hpp"
#include "memnet/rng.hpp"

namespace memnet {

std::vector<PatchOffset> extract_patches(const GrayImage& img, int size, int stride) {
  require(size >= 1 && stride >= 1, ErrorKind::kValue, "patch size and stride must be >= 1");
  require(img.height >= size && img.width >= size, ErrorKind::kValue,
          "image " + std::to_string(img.height) + "x" + std::to_string(img.width) +
              " is smaller than the " + std::to_string(size) + "px patch");
  const int rows = (img.height - size) / stride + 1;
  const int cols = (img.width - size) / stride + 1;
  std::vector<PatchOffset> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.push_back({i * stride, j * stride});
  return out;
}

namespace {

GrayImage rotate90(const GrayImage& in) {
  const int n = in.height;
  GrayImage out(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) out.at(y, x) = in.at(x, n - 1 - y);
  return out;
}

GrayImage mirror(const GrayImage& in) {
  GrayImage out(in.height, in.width);
  for (int y = 0; y < in.height; ++y)
    for (int x = 0; x < in.width; ++x) out.at(y, x) = in.at(y, in.width - 1 - x);
  return out;
}

}  // namespace

GrayImage augment(const GrayImage& patch, int aug_id) {
  require(aug_id >= 0 && aug_id < 8, ErrorKind::kValue, "augmentation id must be in 0..7");
  if (aug_id == 0) return patch;
  if (aug_id == 4) return mirror(patch);
  require(patch.height == patch.width, ErrorKind::kShape,
          "rotations need a square patch");
  GrayImage out = patch;
  for (int r = 0; r < aug_id % 4; ++r) out = rotate90(out);
  return aug_id >= 4 ? mirror(out) : out;
}

PatchSet build_training_set(std::span<const GrayImage> images,
                            std::span<const DegradationSpec> specs,
                            const PatchConfig& config) {
  require(!images.empty(), ErrorKind::kValue, "training set needs at least one image");
  require(!specs.empty(), ErrorKind::kValue, "training set needs at least one degradation");
  require(config.augmentations >= 1 && config.augmentations <= 8, ErrorKind::kConfig,
          "augmentation count must be in 1..8");
  PatchSet set;
  set.patch_size = config.patch_size;
  const int p = config.patch_size;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const GrayImage clean = reference_for(images[i], specs[s]);
      const GrayImage noisy =
          degrade(images[i], specs[s], derive_seed(config.seed, Stream::kNoise, i * 1024 + s));
      for (const PatchOffset& off : extract_patches(clean, p, config.stride)) {
        const GrayImage c = clean.crop(off.y, off.x, p, p);
        const GrayImage d = noisy.crop(off.y, off.x, p, p);
        for (int a = 0; a < config.augmentations; ++a) {
          PatchPair pair;
          pair.degraded = augment(d, a).pixels;
          pair.clean = augment(c, a).pixels;
          pair.provenance = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(s),
                             off, static_cast<std::uint32_t>(a)};
          set.pairs.push_back(std::move(pair));
        }
      }
    }
  }
  return set;
}

namespace {
constexpr char kPatchMagic[4] = {'M', 'P', 'S', 'T'};
constexpr std::uint32_t kPatchVersion = 1;
}  // namespace

void save_patch_cache(const PatchSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  BinaryWriter w(out);
  w.bytes(kPatchMagic, 4);
  w.u32(kPatchVersion);
  w.u32(static_cast<std::uint32_t>(set.pairs.size()));
  w.u32(static_cast<std::uint32_t>(set.patch_size));
  for (const PatchPair& pair : set.pairs) {
    w.f32s(pair.degraded);
    w.f32s(pair.clean);
  }
  require(out.good(), ErrorKind::kIo, "write failed for " + path.string());
}

PatchSet load_patch_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  BinaryReader r(in, path.string());
  char magic[4];
  r.bytes(magic, 4);
  require(std::equal(magic, magic + 4, kPatchMagic), ErrorKind::kFormat,
          path.string() + ": not an MPST patch cache");
  require(r.u32() == kPatchVersion, ErrorKind::kFormat,
          path.string() + ": unsupported MPST version");
  const std::uint32_t count = r.u32();
  PatchSet set;
  set.patch_size = static_cast<int>(r.u32());
  require(set.patch_size >= 1, ErrorKind::kFormat, path.string() + ": bad patch size");
  const std::size_t n = static_cast<std::size_t>(set.patch_size) * set.patch_size;
  set.pairs.resize(count);
  for (PatchPair& pair : set.pairs) {
    pair.degraded = r.f32s(n);
    pair.clean = r.f32s(n);
  }
  r.expect_end();
  return set;
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> make_batch(const PatchSet& set,
                                           std::span<const std::size_t> indices) {
  require(!indices.empty(), ErrorKind::kValue, "empty batch");
  const int p = set.patch_size;
  const std::size_t n = static_cast<std::size_t>(p) * p;
  const Shape shape{static_cast<int>(indices.size()), 1, p, p};
  std::vector<T> input(shape.numel()), target(shape.numel());
  for (std::size_t b = 0; b < indices.size(); ++b) {
    const PatchPair& pair = set.pairs.at(indices[b]);
    std::copy(pair.degraded.begin(), pair.degraded.end(), input.begin() + b * n);
    std::copy(pair.clean.begin(), pair.clean.end(), target.begin() + b * n);
  }
  return {Tensor<T>(shape, std::move(input)), Tensor<T>(shape, std::move(target))};
}

template std::pair<Tensor<float>, Tensor<float>> make_batch<float>(
    const PatchSet&, std::span<const std::size_t>);
template std::pair<Tensor<double>, Tensor<double>> make_batch<double>(
    const PatchSet&, std::span<const std::size_t>);

}  // namespace memnet
