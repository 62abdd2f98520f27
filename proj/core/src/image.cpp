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

#include "memnet/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "memnet/error.hpp"

namespace memnet {

GrayImage::GrayImage(int h, int w, float fill) : height(h), width(w) {
  require(h >= 1 && w >= 1, ErrorKind::kValue, "image dimensions must be >= 1");
  pixels.assign(static_cast<std::size_t>(h) * w, fill);
}

GrayImage::GrayImage(int h, int w, std::vector<float> px)
    : height(h), width(w), pixels(std::move(px)) {
  require(h >= 1 && w >= 1, ErrorKind::kValue, "image dimensions must be >= 1");
  require(pixels.size() == static_cast<std::size_t>(h) * w, ErrorKind::kShape,
          "pixel count does not match image dimensions");
}

void GrayImage::clamp() {
  for (float& p : pixels) p = std::clamp(p, 0.0f, 1.0f);
}

GrayImage GrayImage::crop(int top, int left, int h, int w) const {
  require(top >= 0 && left >= 0 && top + h <= height && left + w <= width,
          ErrorKind::kValue, "crop window exceeds image bounds");
  GrayImage out(h, w);
  for (int y = 0; y < h; ++y)
    std::copy_n(pixels.begin() + static_cast<std::ptrdiff_t>((top + y) * width + left), w,
                out.pixels.begin() + static_cast<std::ptrdiff_t>(y) * w);
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

  int next_int(const char* what) {
    skip_space_and_comments();
    require(pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_])),
            ErrorKind::kFormat, std::string("PGM: expected ") + what);
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_++] - '0');
      require(v <= 1 << 24, ErrorKind::kFormat, std::string("PGM: ") + what + " too large");
    }
    return static_cast<int>(v);
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 2;
};

}  // namespace

GrayImage decode_pgm(const std::string& bytes) {
  require(bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5'),
          ErrorKind::kFormat, "PGM: missing P2/P5 magic");
  const bool binary = bytes[1] == '5';
  HeaderReader r(bytes);
  const int w = r.next_int("width");
  const int h = r.next_int("height");
  const int maxval = r.next_int("maxval");
  require(w >= 1 && h >= 1, ErrorKind::kFormat, "PGM: dimensions must be >= 1");
  require(maxval == 255, ErrorKind::kFormat,
          "PGM: maxval must be 255, got " + std::to_string(maxval));
  GrayImage img(h, w);
  const std::size_t n = img.size();
  if (binary) {
    require(r.pos() < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[r.pos()])),
            ErrorKind::kFormat, "PGM: missing whitespace after header");
    const std::size_t start = r.pos() + 1;
    require(bytes.size() - start >= n, ErrorKind::kFormat, "PGM: truncated pixel data");
    for (std::size_t i = 0; i < n; ++i)
      img.pixels[i] = static_cast<unsigned char>(bytes[start + i]) / 255.0f;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = r.next_int("pixel value");
      require(v <= 255, ErrorKind::kFormat, "PGM: pixel value exceeds maxval");
      img.pixels[i] = static_cast<float>(v) / 255.0f;
    }
  }
  return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_pgm(bytes);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::string encode_pgm(const GrayImage& img) {
  std::string out = "P5\n" + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.size());
  for (float p : img.pixels) {
    const float v = std::clamp(p, 0.0f, 1.0f) * 255.0f;
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v))));
  }
  return out;
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  const std::string bytes = encode_pgm(img);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorKind::kIo, "write failed for " + path.string());
}

GrayImage quantize_8bit(const GrayImage& img) {
  GrayImage out = img;
  for (float& p : out.pixels)
    p = static_cast<float>(std::lround(std::clamp(p, 0.0f, 1.0f) * 255.0f)) / 255.0f;
  return out;
}

std::vector<std::filesystem::path> list_pgm(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorKind::kIo,
          "not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".pgm")
      out.push_back(entry.path());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return out;
}

}  // namespace memnet
