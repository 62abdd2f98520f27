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

#ifndef MEMNET_BINARY_IO_HPP_
#define MEMNET_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "memnet/error.hpp"

namespace memnet {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written in host order, which must be little-endian");

// Little-endian writer for the checkpoint and patch-cache formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { bytes(&v, sizeof v); }
  void f64(double v) { bytes(&v, sizeof v); }
  void f32s(std::span<const float> v) { bytes(v.data(), v.size_bytes()); }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void bytes(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    require(static_cast<std::size_t>(in_.gcount()) == n, ErrorKind::kFormat,
            source_ + ": unexpected end of file");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, sizeof v);
    return v;
  }
  std::vector<float> f32s(std::size_t n) {
    std::vector<float> v(n);
    bytes(v.data(), n * sizeof(float));
    return v;
  }
  void expect_end() {
    require(in_.peek() == std::char_traits<char>::eof(), ErrorKind::kFormat,
            source_ + ": trailing bytes");
  }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace memnet

#endif  // MEMNET_BINARY_IO_HPP_
