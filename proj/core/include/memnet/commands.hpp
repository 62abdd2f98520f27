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

#ifndef MEMNET_COMMANDS_HPP_
#define MEMNET_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "memnet/config.hpp"
#include "memnet/metrics.hpp"
#include "memnet/trainer.hpp"

namespace memnet {

namespace fs = std::filesystem;

// Loads every PGM of config.train_dir and cuts the patch set, or reads
// config.patch_cache when that file exists (and writes it when it does not).
PatchSet prepare_training_set(const RunConfig& config);

// Trains from scratch, or continues from `resume`. Writes
//   <checkpoint_dir>/epoch_NNNN.memn and latest.memn after every epoch,
//   <output_dir>/train_log.csv with iteration,epoch,lr,loss rows
// (appended to when resuming). Returns the completed epoch count.
int cmd_train(const RunConfig& config, const std::optional<fs::path>& resume = std::nullopt);

struct EvalOptions {
  DegradationSpec spec = Denoise{30};
  std::uint64_t seed = 1;
  std::optional<int> shave;  // default_shave(spec) when unset
  std::optional<MemNetConfig> expected;
};

// Degrades each test image, restores it in eval mode and scores both the
// degraded input and the restoration against the clean reference.
MetricsReport cmd_eval(const fs::path& checkpoint, const fs::path& test_dir,
                       const EvalOptions& options);

// Restores one image. With emit_intermediate the y_m of a multi-supervised
// network are also written as <out-stem>_y<m><ext>. Returns written paths.
std::vector<fs::path> cmd_infer(const fs::path& checkpoint, const fs::path& in,
                                const fs::path& out, bool emit_intermediate = false);

void cmd_degrade(const fs::path& in, const DegradationSpec& spec, const fs::path& out,
                 std::uint64_t seed);

// Gate weight-norm curves and the per-block group means.
std::vector<GateNorms> cmd_analyze_gates(const fs::path& checkpoint, const fs::path& curves_tsv,
                                         const fs::path& bars_tsv);

struct SpectrumOptions {
  int bins = 32;
  fs::path out_tsv;
  // With two or more inputs, per-bin density(first) - density(other) for
  // every other input.
  std::optional<fs::path> diff_tsv;
  // When set, the images are passed through the network instead and the
  // spectra of its output (and of every y_m for multi-supervised nets) are
  // reported.
  std::optional<fs::path> checkpoint;
};

std::vector<SpectralDensity> cmd_analyze_spectrum(const std::vector<fs::path>& images,
                                                  const SpectrumOptions& options);

}  // namespace memnet

#endif  // MEMNET_COMMANDS_HPP_
