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

#include "memnet/commands.hpp"

#include <cstdio>
#include <fstream>

#include "memnet/checkpoint.hpp"
#include "memnet/rng.hpp"

namespace memnet {
namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  require(out.good(), ErrorKind::kIo, "cannot write " + path.string());
  return out;
}

std::string epoch_name(int epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%04d.memn", epoch);
  return buf;
}

}  // namespace

PatchSet prepare_training_set(const RunConfig& config) {
  if (!config.patch_cache.empty() && fs::exists(config.patch_cache))
    return load_patch_cache(config.patch_cache);
  std::vector<GrayImage> images;
  for (const fs::path& p : list_pgm(config.train_dir)) images.push_back(load_pgm(p));
  require(!images.empty(), ErrorKind::kIo, "no .pgm files in " + config.train_dir.string());
  PatchSet set = build_training_set(images, config.specs(), config.patch_config());
  if (!config.patch_cache.empty()) save_patch_cache(set, config.patch_cache);
  return set;
}

int cmd_train(const RunConfig& config, const std::optional<fs::path>& resume) {
  config.validate();
  require(!config.checkpoint_dir.empty(), ErrorKind::kConfig, "paths.checkpoint_dir is not set");
  require(!config.output_dir.empty(), ErrorKind::kConfig, "paths.output_dir is not set");
  const PatchSet data = prepare_training_set(config);

  MemNetParams<float> net;
  int start = 0;
  if (resume) {
    Checkpoint ck = load_checkpoint(*resume, config.model);
    net = std::move(ck.net);
    start = ck.epoch;
  } else {
    net = MemNetParams<float>::create(config.model, config.train.seed);
  }

  fs::create_directories(config.checkpoint_dir);
  const fs::path log_path = config.output_dir / "train_log.csv";
  const bool append = resume.has_value() && fs::exists(log_path);
  std::ofstream log = open_out(log_path, append ? std::ios::app : std::ios::out);
  if (!append) log << "iteration,epoch,lr,loss\n";

  TrainHooks hooks;
  hooks.on_iteration = [&](const LossRecord& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%lld,%d,%.10g,%.10g\n", static_cast<long long>(r.iteration),
                  r.epoch, r.lr, r.loss);
    log << buf;
  };
  hooks.on_epoch = [&](int completed, MemNetParams<float>& n) {
    log.flush();
    save_checkpoint(n, completed, config.checkpoint_dir / epoch_name(completed));
    save_checkpoint(n, completed, config.checkpoint_dir / "latest.memn");
  };
  return train(net, data, config.train, start, hooks);
}

MetricsReport cmd_eval(const fs::path& checkpoint, const fs::path& test_dir,
                       const EvalOptions& options) {
  Checkpoint ck = load_checkpoint(checkpoint, options.expected);
  MetricsReport report;
  report.spec = to_string(options.spec);
  report.shave = options.shave.value_or(default_shave(options.spec));
  const auto files = list_pgm(test_dir);
  require(!files.empty(), ErrorKind::kIo, "no .pgm files in " + test_dir.string());
  for (std::size_t i = 0; i < files.size(); ++i) {
    const GrayImage clean = load_pgm(files[i]);
    const GrayImage reference = reference_for(clean, options.spec);
    const GrayImage degraded =
        degrade(clean, options.spec, derive_seed(options.seed, Stream::kEvalNoise, i));
    const GrayImage restored = restore(ck.net, degraded);
    ImageMetrics m;
    m.name = files[i].filename().string();
    m.psnr_degraded = psnr(reference, degraded, report.shave);
    m.ssim_degraded = ssim(reference, degraded, report.shave);
    m.psnr = psnr(reference, restored, report.shave);
    m.ssim = ssim(reference, restored, report.shave);
    report.images.push_back(std::move(m));
  }
  return report;
}

std::vector<fs::path> cmd_infer(const fs::path& checkpoint, const fs::path& in,
                                const fs::path& out, bool emit_intermediate) {
  Checkpoint ck = load_checkpoint(checkpoint);
  const GrayImage img = load_pgm(in);
  std::vector<fs::path> written{out};
  if (!emit_intermediate) {
    save_pgm(restore(ck.net, img), out);
    return written;
  }
  const std::vector<GrayImage> all = restore_all(ck.net, img);
  save_pgm(all.front(), out);
  for (std::size_t m = 1; m < all.size(); ++m) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + "_y" + std::to_string(m) + out.extension().string());
    save_pgm(all[m], p);
    written.push_back(p);
  }
  return written;
}

void cmd_degrade(const fs::path& in, const DegradationSpec& spec, const fs::path& out,
                 std::uint64_t seed) {
  save_pgm(degrade(load_pgm(in), spec, seed), out);
}

std::vector<GateNorms> cmd_analyze_gates(const fs::path& checkpoint, const fs::path& curves_tsv,
                                         const fs::path& bars_tsv) {
  const Checkpoint ck = load_checkpoint(checkpoint);
  const auto norms = gate_weight_norms(ck.net);
  if (!curves_tsv.empty()) {
    std::ofstream out = open_out(curves_tsv);
    write_gate_norms_tsv(out, norms);
  }
  if (!bars_tsv.empty()) {
    std::ofstream out = open_out(bars_tsv);
    write_gate_bars_tsv(out, norms);
  }
  return norms;
}

std::vector<SpectralDensity> cmd_analyze_spectrum(const std::vector<fs::path>& images,
                                                  const SpectrumOptions& options) {
  require(!images.empty(), ErrorKind::kValue, "no input images");
  std::optional<Checkpoint> ck;
  if (options.checkpoint) ck = load_checkpoint(*options.checkpoint);
  std::vector<SpectralDensity> densities;
  for (const fs::path& path : images) {
    const GrayImage img = load_pgm(path);
    const std::string name = path.filename().string();
    if (!ck) {
      densities.push_back(spectral_density(img, options.bins, name));
    } else if (ck->net.config.multi_supervised) {
      const auto outs = restore_all(ck->net, img);
      densities.push_back(spectral_density(outs[0], options.bins, name + ":final"));
      for (std::size_t m = 1; m < outs.size(); ++m)
        densities.push_back(
            spectral_density(outs[m], options.bins, name + ":y" + std::to_string(m)));
    } else {
      densities.push_back(spectral_density(restore(ck->net, img), options.bins, name + ":final"));
    }
  }
  if (!options.out_tsv.empty()) {
    std::ofstream out = open_out(options.out_tsv);
    write_spectrum_tsv(out, densities);
  }
  if (options.diff_tsv) {
    require(densities.size() >= 2, ErrorKind::kValue, "a density difference needs two inputs");
    std::ofstream out = open_out(*options.diff_tsv);
    out << "minuend\tsubtrahend\tbin\tr_lo\tr_hi\tdifference\n";
    for (std::size_t i = 1; i < densities.size(); ++i) {
      const auto diff = density_difference(densities[0], densities[i]);
      for (std::size_t b = 0; b < diff.size(); ++b) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "\t%zu\t%.6f\t%.6f\t%.10g\n", b, densities[0].edges[b],
                      densities[0].edges[b + 1], diff[b]);
        out << densities[0].image << '\t' << densities[i].image << buf;
      }
    }
  }
  return densities;
}

}  // namespace memnet
