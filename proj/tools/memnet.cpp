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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memnet/checkpoint.hpp"
#include "memnet/commands.hpp"
#include "memnet/error.hpp"
#include "memnet/rng.hpp"
#include "memnet/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace memnet;

std::optional<MemNetConfig> expected_arch(const std::string& arch) {
  if (arch.empty()) return std::nullopt;
  return load_config(arch).model;
}

int run(int argc, char** argv) {
  CLI::App app{"MemNet image restoration"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "train a network from a config file");
  std::string train_config, train_resume;
  train->add_option("config", train_config, "run config")->required();
  train->add_option("--resume", train_resume, "checkpoint to continue from");
  std::optional<double> train_clip;
  train->add_option("--clip-norm", train_clip, "clip the global gradient norm (overrides train.clip_norm)")
      ->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "score a checkpoint on a test directory");
  std::string eval_ckpt, eval_dir, eval_spec = "denoise:30", eval_csv, eval_arch;
  std::uint64_t eval_seed = 1;
  std::optional<int> eval_shave;
  eval->add_option("checkpoint", eval_ckpt)->required();
  eval->add_option("test_dir", eval_dir)->required();
  eval->add_option("--spec", eval_spec, "denoise:<sigma>, sr:<scale> or jpeg:<quality>");
  eval->add_option("--seed", eval_seed);
  eval->add_option("--shave", eval_shave, "border pixels ignored by the metrics");
  eval->add_option("--csv", eval_csv, "report file (stdout when omitted)");
  eval->add_option("--config", eval_arch, "config whose architecture the checkpoint must match");

  auto* infer = app.add_subcommand("infer", "restore one image");
  std::string infer_ckpt, infer_in, infer_out;
  bool infer_intermediate = false;
  infer->add_option("checkpoint", infer_ckpt)->required();
  infer->add_option("input", infer_in)->required();
  infer->add_option("output", infer_out)->required();
  infer->add_flag("--emit-intermediate", infer_intermediate,
                  "also write every block prediction y_m");

  auto* deg = app.add_subcommand("degrade", "apply a degradation to one image");
  std::string deg_in, deg_spec, deg_out;
  std::uint64_t deg_seed = 1;
  deg->add_option("input", deg_in)->required();
  deg->add_option("spec", deg_spec)->required();
  deg->add_option("output", deg_out)->required();
  deg->add_option("--seed", deg_seed);

  auto* gates = app.add_subcommand("analyze-gates", "gate weight norms of a checkpoint");
  std::string gates_ckpt, gates_curves, gates_bars;
  gates->add_option("checkpoint", gates_ckpt)->required();
  gates->add_option("--curves", gates_curves, "per-entry norm TSV")->required();
  gates->add_option("--bars", gates_bars, "per-block group mean TSV");

  auto* spec = app.add_subcommand("analyze-spectrum", "radial spectral density of images");
  std::vector<std::string> spec_images;
  std::string spec_out, spec_diff, spec_ckpt;
  int spec_bins = 32;
  spec->add_option("images", spec_images)->required();
  spec->add_option("--out", spec_out, "density TSV")->required();
  spec->add_option("--bins", spec_bins);
  spec->add_option("--diff", spec_diff, "first-minus-other density TSV");
  spec->add_option("--checkpoint", spec_ckpt, "analyse network outputs for the images");

  auto* synth = app.add_subcommand("synth", "write synthetic grayscale test images");
  std::string synth_dir;
  int synth_count = 5, synth_h = 157, synth_w = 157;
  std::uint64_t synth_seed = 1;
  synth->add_option("dir", synth_dir)->required();
  synth->add_option("--count", synth_count);
  synth->add_option("--height", synth_h);
  synth->add_option("--width", synth_w);
  synth->add_option("--seed", synth_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    return e.get_exit_code();
  }

  if (*train) {
    std::optional<fs::path> resume;
    if (!train_resume.empty()) resume = train_resume;
    RunConfig config = load_config(train_config);
    if (train_clip) config.train.clip_norm = train_clip;
    const int epochs = cmd_train(config, resume);
    std::cout << "trained " << epochs << " epochs\n";
  } else if (*eval) {
    EvalOptions opt;
    opt.spec = parse_spec(eval_spec);
    opt.seed = eval_seed;
    opt.shave = eval_shave;
    opt.expected = expected_arch(eval_arch);
    const MetricsReport report = cmd_eval(eval_ckpt, eval_dir, opt);
    if (eval_csv.empty()) {
      report.write_csv(std::cout);
    } else {
      std::ofstream out(eval_csv);
      require(out.good(), ErrorKind::kIo, "cannot write " + eval_csv);
      report.write_csv(out);
    }
  } else if (*infer) {
    cmd_infer(infer_ckpt, infer_in, infer_out, infer_intermediate);
  } else if (*deg) {
    cmd_degrade(deg_in, parse_spec(deg_spec), deg_out, deg_seed);
  } else if (*gates) {
    cmd_analyze_gates(gates_ckpt, gates_curves, gates_bars);
  } else if (*spec) {
    SpectrumOptions opt;
    opt.bins = spec_bins;
    opt.out_tsv = spec_out;
    if (!spec_diff.empty()) opt.diff_tsv = spec_diff;
    if (!spec_ckpt.empty()) opt.checkpoint = spec_ckpt;
    cmd_analyze_spectrum({spec_images.begin(), spec_images.end()}, opt);
  } else if (*synth) {
    require(synth_count > 0, ErrorKind::kValue, "--count must be positive");
    fs::create_directories(synth_dir);
    for (int i = 0; i < synth_count; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "synth_%03d.pgm", i);
      save_pgm(synth_image(synth_h, synth_w, derive_seed(synth_seed, Stream::kSynth, i)),
               fs::path(synth_dir) / name);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const memnet::Error& e) {
    std::cerr << "error: " << memnet::to_string(e.kind()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
  }
  return EXIT_FAILURE;
}
