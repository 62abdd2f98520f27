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

#ifndef MEMNET_IMAGE_HPP_
#define MEMNET_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace memnet {

// Single-channel image with pixels in [0, 1], row-major.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  GrayImage() = default;
  GrayImage(int height, int width, float fill = 0.0f);
  GrayImage(int height, int width, std::vector<float> pixels);

  float& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  float at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return pixels.size(); }

  void clamp();
  // Top-left crop.
  GrayImage crop(int top, int left, int h, int w) const;
  bool operator==(const GrayImage&) const = default;
};

// PGM P2/P5 with maxval 255; values map to [0, 1] by division by 255.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage decode_pgm(const std::string& bytes);

// Binary P5; each pixel is clamped then rounded to the nearest of 0..255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);
std::string encode_pgm(const GrayImage& img);

// Snaps every pixel to the 1/255 grid.
GrayImage quantize_8bit(const GrayImage& img);

// *.pgm files of a directory, sorted by file name.
std::vector<std::filesystem::path> list_pgm(const std::filesystem::path& dir);

}  // namespace memnet

#endif  // MEMNET_IMAGE_HPP_
