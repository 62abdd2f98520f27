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

#include "memnet/checkpoint.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "memnet/binary_io.hpp"

namespace memnet {
namespace {
constexpr char kMagic[4] = {'M', 'E', 'M', 'N'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::string encode_checkpoint(MemNetParams<float>& net, int epoch) {
  std::ostringstream out(std::ios::binary);
  BinaryWriter w(out);
  const MemNetConfig& c = net.config;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(c.blocks));
  w.u32(static_cast<std::uint32_t>(c.recursions));
  w.u32(static_cast<std::uint32_t>(c.filters));
  w.u32(static_cast<std::uint32_t>(c.variant));
  w.u32(c.multi_supervised ? 1u : 0u);
  w.f64(c.loss_alpha());
  w.u32(static_cast<std::uint32_t>(epoch));
  const auto params = net.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const Parameter<float>* p : params) {
    const Shape& s = p->value.shape();
    w.u32(static_cast<std::uint32_t>(p->kind));
    for (int e : {s.n, s.c, s.h, s.w}) w.u32(static_cast<std::uint32_t>(e));
    w.f32s(p->value.values());
    w.f32s(p->momentum);
  }
  const auto bns = net.batchnorms();
  w.u32(static_cast<std::uint32_t>(bns.size()));
  for (const BatchNormLayer<float>* bn : bns) {
    w.u32(static_cast<std::uint32_t>(bn->channels()));
    w.f32s(bn->stats.mean);
    w.f32s(bn->stats.var);
  }
  return out.str();
}

Checkpoint decode_checkpoint(const std::string& bytes, const std::string& source) {
  std::istringstream in(bytes, std::ios::binary);
  BinaryReader r(in, source);
  char magic[4];
  r.bytes(magic, 4);
  require(std::equal(magic, magic + 4, kMagic), ErrorKind::kFormat,
          source + ": not a MEMN checkpoint");
  require(r.u32() == kVersion, ErrorKind::kFormat, source + ": unsupported checkpoint version");
  MemNetConfig c;
  c.blocks = static_cast<int>(r.u32());
  c.recursions = static_cast<int>(r.u32());
  c.filters = static_cast<int>(r.u32());
  const std::uint32_t variant = r.u32();
  require(variant <= 2, ErrorKind::kFormat, source + ": bad variant tag");
  c.variant = static_cast<Variant>(variant);
  c.multi_supervised = r.u32() != 0;
  c.alpha = r.f64();
  require(c.blocks >= 1 && c.blocks <= 1024 && c.recursions >= 1 && c.recursions <= 1024 &&
              c.filters >= 1 && c.filters <= 4096,
          ErrorKind::kFormat, source + ": implausible architecture");
  Checkpoint ck;
  ck.epoch = static_cast<int>(r.u32());
  // Build the expected layout, then overwrite every buffer from the file.
  ck.net = MemNetParams<float>::create(c, 0);
  auto params = ck.net.parameters();
  require(r.u32() == params.size(), ErrorKind::kFormat,
          source + ": parameter count does not match the architecture");
  for (Parameter<float>* p : params) {
    const Shape& s = p->value.shape();
    require(r.u32() == static_cast<std::uint32_t>(p->kind), ErrorKind::kFormat,
            source + ": parameter kind mismatch at " + p->name);
    for (int e : {s.n, s.c, s.h, s.w})
      require(r.u32() == static_cast<std::uint32_t>(e), ErrorKind::kFormat,
              source + ": shape mismatch at " + p->name);
    const auto values = r.f32s(p->value.numel());
    std::copy(values.begin(), values.end(), p->value.mutable_values().begin());
    p->momentum = r.f32s(p->value.numel());
  }
  auto bns = ck.net.batchnorms();
  require(r.u32() == bns.size(), ErrorKind::kFormat,
          source + ": batch-norm count does not match the architecture");
  for (BatchNormLayer<float>* bn : bns) {
    require(r.u32() == static_cast<std::uint32_t>(bn->channels()), ErrorKind::kFormat,
            source + ": batch-norm channel mismatch");
    bn->stats.mean = r.f32s(static_cast<std::size_t>(bn->channels()));
    bn->stats.var = r.f32s(static_cast<std::size_t>(bn->channels()));
  }
  r.expect_end();
  return ck;
}

void save_checkpoint(MemNetParams<float>& net, int epoch, const std::filesystem::path& path) {
  const std::string bytes = encode_checkpoint(net, epoch);
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(out.good(), ErrorKind::kIo, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<MemNetConfig>& expected) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Checkpoint ck = decode_checkpoint(bytes, path.string());
  if (expected) {
    const MemNetConfig& got = ck.net.config;
    require(got.blocks == expected->blocks && got.recursions == expected->recursions &&
                got.filters == expected->filters && got.variant == expected->variant &&
                got.multi_supervised == expected->multi_supervised,
            ErrorKind::kConfig,
            path.string() + ": checkpoint architecture M" + std::to_string(got.blocks) + "R" +
                std::to_string(got.recursions) + "/F" + std::to_string(got.filters) + " " +
                std::string(to_string(got.variant)) + " does not match the requested one");
  }
  return ck;
}

}  // namespace memnet
