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

#include "memnet/config.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "memnet/error.hpp"

namespace memnet {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kDenoise: return "denoise";
    case TaskKind::kSuperResolve: return "sr";
    case TaskKind::kJpeg: return "jpeg";
  }
  return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename N>
N parse_number(std::string_view key, std::string_view text) {
  N value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::kConfig,
          "bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  fail(ErrorKind::kConfig, "bad boolean '" + std::string(text) + "' for " + std::string(key));
}

template <typename N>
std::vector<N> parse_list(std::string_view key, std::string_view text) {
  std::vector<N> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<N>(key, trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  require(!out.empty(), ErrorKind::kConfig, std::string(key) + " must not be empty");
  return out;
}

std::string format(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename N>
std::string format_list(const std::vector<N>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<N>)
      out += format(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::vector<DegradationSpec> RunConfig::specs() const {
  std::vector<DegradationSpec> out;
  switch (task) {
    case TaskKind::kDenoise:
      for (double s : sigmas) out.push_back(Denoise{s});
      break;
    case TaskKind::kSuperResolve:
      for (int s : scales) out.push_back(SuperResolve{s});
      break;
    case TaskKind::kJpeg:
      for (int q : qualities) out.push_back(Jpeg{q});
      break;
  }
  return out;
}

PatchConfig RunConfig::patch_config() const {
  return PatchConfig{patch_size, stride, augmentations, train.seed};
}

void RunConfig::validate() const {
  model.validate();
  train.validate();
  for (double s : sigmas) require(s >= 0, ErrorKind::kConfig, "task.sigma must be >= 0");
  for (int s : scales)
    require(s >= 2 && s <= 4, ErrorKind::kConfig, "task.scale entries must be 2, 3 or 4");
  for (int q : qualities)
    require(q >= 1 && q <= 100, ErrorKind::kConfig, "task.quality entries must be in [1, 100]");
  require(patch_size >= 1 && stride >= 1, ErrorKind::kConfig,
          "data.patch_size and data.stride must be >= 1");
  require(augmentations >= 1 && augmentations <= 8, ErrorKind::kConfig,
          "data.augmentations must be in 1..8");
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string_view::npos, ErrorKind::kConfig,
            "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "seed") c.train.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "architecture.m") c.model.blocks = parse_number<int>(key, value);
    else if (key == "architecture.r") c.model.recursions = parse_number<int>(key, value);
    else if (key == "architecture.f") c.model.filters = parse_number<int>(key, value);
    else if (key == "architecture.variant") c.model.variant = parse_variant(value);
    else if (key == "architecture.multi_supervised") c.model.multi_supervised = parse_bool(key, value);
    else if (key == "architecture.alpha") {
      if (value.empty()) c.model.alpha.reset();
      else c.model.alpha = parse_number<double>(key, value);
    }
    else if (key == "train.lr") c.train.base_lr = parse_number<double>(key, value);
    else if (key == "train.lr_drop_every") c.train.lr_drop_every = parse_number<int>(key, value);
    else if (key == "train.lr_drop_factor") c.train.lr_drop_factor = parse_number<double>(key, value);
    else if (key == "train.momentum") c.train.momentum = parse_number<double>(key, value);
    else if (key == "train.weight_decay") c.train.weight_decay = parse_number<double>(key, value);
    else if (key == "train.batch_size") c.train.batch_size = parse_number<int>(key, value);
    else if (key == "train.clip_norm") {
      if (value.empty()) c.train.clip_norm.reset();
      else c.train.clip_norm = parse_number<double>(key, value);
    }
    else if (key == "train.epochs") c.train.epochs = parse_number<int>(key, value);
    else if (key == "train.max_iterations") c.train.max_iterations = parse_number<std::int64_t>(key, value);
    else if (key == "task.kind") {
      if (value == "denoise") c.task = TaskKind::kDenoise;
      else if (value == "sr") c.task = TaskKind::kSuperResolve;
      else if (value == "jpeg") c.task = TaskKind::kJpeg;
      else fail(ErrorKind::kConfig, "unknown task.kind '" + std::string(value) + "'");
    }
    else if (key == "task.sigma") c.sigmas = parse_list<double>(key, value);
    else if (key == "task.scale") c.scales = parse_list<int>(key, value);
    else if (key == "task.quality") c.qualities = parse_list<int>(key, value);
    else if (key == "data.patch_size") c.patch_size = parse_number<int>(key, value);
    else if (key == "data.stride") c.stride = parse_number<int>(key, value);
    else if (key == "data.augmentations") c.augmentations = parse_number<int>(key, value);
    else if (key == "paths.train_dir") c.train_dir = std::string(value);
    else if (key == "paths.test_dir") c.test_dir = std::string(value);
    else if (key == "paths.checkpoint_dir") c.checkpoint_dir = std::string(value);
    else if (key == "paths.output_dir") c.output_dir = std::string(value);
    else if (key == "paths.patch_cache") c.patch_cache = std::string(value);
    else fail(ErrorKind::kConfig, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "seed=" << c.train.seed << '\n'
      << "architecture.m=" << c.model.blocks << '\n'
      << "architecture.r=" << c.model.recursions << '\n'
      << "architecture.f=" << c.model.filters << '\n'
      << "architecture.variant=" << to_string(c.model.variant) << '\n'
      << "architecture.multi_supervised=" << (c.model.multi_supervised ? "true" : "false") << '\n'
      << "architecture.alpha=" << (c.model.alpha ? format(*c.model.alpha) : "") << '\n'
      << "train.lr=" << format(c.train.base_lr) << '\n'
      << "train.lr_drop_every=" << c.train.lr_drop_every << '\n'
      << "train.lr_drop_factor=" << format(c.train.lr_drop_factor) << '\n'
      << "train.momentum=" << format(c.train.momentum) << '\n'
      << "train.weight_decay=" << format(c.train.weight_decay) << '\n'
      << "train.batch_size=" << c.train.batch_size << '\n'
      << "train.clip_norm=" << (c.train.clip_norm ? format(*c.train.clip_norm) : "") << '\n'
      << "train.epochs=" << c.train.epochs << '\n'
      << "train.max_iterations=" << c.train.max_iterations << '\n'
      << "task.kind=" << to_string(c.task) << '\n'
      << "task.sigma=" << format_list(c.sigmas) << '\n'
      << "task.scale=" << format_list(c.scales) << '\n'
      << "task.quality=" << format_list(c.qualities) << '\n'
      << "data.patch_size=" << c.patch_size << '\n'
      << "data.stride=" << c.stride << '\n'
      << "data.augmentations=" << c.augmentations << '\n'
      << "paths.train_dir=" << c.train_dir.string() << '\n'
      << "paths.test_dir=" << c.test_dir.string() << '\n'
      << "paths.checkpoint_dir=" << c.checkpoint_dir.string() << '\n'
      << "paths.output_dir=" << c.output_dir.string() << '\n'
      << "paths.patch_cache=" << c.patch_cache.string() << '\n';
  return out.str();
}

}  // namespace memnet
