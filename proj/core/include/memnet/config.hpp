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

#ifndef MEMNET_CONFIG_HPP_
#define MEMNET_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "memnet/dataset.hpp"
#include "memnet/degrade.hpp"
#include "memnet/model.hpp"
#include "memnet/optim.hpp"

namespace memnet {

enum class TaskKind { kDenoise, kSuperResolve, kJpeg };

std::string_view to_string(TaskKind kind);

// Everything a run needs. Serialised as flat `key=value` lines; see
// emit_config() for the full key list and README.md for their meaning.
struct RunConfig {
  MemNetConfig model;
  TrainConfig train;

  TaskKind task = TaskKind::kDenoise;
  std::vector<double> sigmas{30, 50, 70};
  std::vector<int> scales{2, 3, 4};
  std::vector<int> qualities{10, 20};

  int patch_size = 31;
  int stride = 21;
  int augmentations = 8;

  std::filesystem::path train_dir;
  std::filesystem::path test_dir;
  std::filesystem::path checkpoint_dir;
  std::filesystem::path output_dir;
  std::filesystem::path patch_cache;

  // Degradations of the configured task family, all levels.
  std::vector<DegradationSpec> specs() const;
  PatchConfig patch_config() const;
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// Blank lines and lines starting with '#' are ignored. Unknown keys are
// rejected. Keys that are absent keep their defaults.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Every key in a fixed order; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace memnet

#endif  // MEMNET_CONFIG_HPP_
