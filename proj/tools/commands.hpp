#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strumscribe/run_config.hpp"

namespace strumscribe::cli {

namespace fs = std::filesystem;

/// Command-line values that override the config file when given.
struct Overrides {
  std::optional<fs::path> config_path;
  std::optional<std::uint64_t> seed;

  std::optional<double> sigma, c1, c2;

  std::optional<std::vector<int>> subdivision_factors;
  std::optional<double> deletion_penalty, insertion_penalty, tempo_change_penalty;
  std::optional<double> snap_tolerance_sec, tempo_free_band;
  std::optional<std::size_t> lookahead;

  std::optional<int> frame_size, hop_size, mel_bands;
  std::optional<double> fmin_hz, fmax_hz, log_gain, delta;
  std::optional<int> pre_max, post_max, pre_avg, post_avg;
  std::optional<double> min_gap_sec;

  std::optional<bool> use_repeat_symbol, show_pattern_ids;
  std::optional<int> grid_resolution;

  std::optional<double> strum_tolerance_sec, barline_tolerance_sec;

  /// Defaults, then the config file, then the flags.
  RunConfig resolve() const;
};

struct OnsetsArgs {
  fs::path in, out;
  std::optional<fs::path> tune_manifest;
  int trials = 100;
};

struct BarlinesArgs {
  fs::path in, out;
  bool bypass = false;
};

struct DecodeArgs {
  fs::path strums, barlines, vocab, out;
};

struct EvalArgs {
  std::optional<fs::path> transcription, barlines, vocab, ground_truth, manifest;
  fs::path out;
  unsigned jobs = 0;
};

struct SynthArgs {
  fs::path vocab, out_dir;
  double tempo_bpm = 120.0;
  std::size_t measures = 32;
  double sigma_norm = 0.0;
  double switch_prob = 0.1;
  double spurious_rate = 0.0;
  double miss_rate = 0.0;
  double rest_prob = 0.0;
  bool wav = false;
  int sample_rate = 44100;
};

struct RenderArgs {
  fs::path transcription, vocab;
  std::optional<fs::path> out;
};

struct PipelineArgs {
  fs::path wav, barlines, vocab, out;
  std::optional<fs::path> text_out, dump_dir;
  bool bypass = false;
};

int run_onsets(const OnsetsArgs& args, const RunConfig& cfg);
int run_barlines(const BarlinesArgs& args, const RunConfig& cfg);
int run_decode(const DecodeArgs& args, const RunConfig& cfg);
int run_eval(const EvalArgs& args, const RunConfig& cfg);
int run_synth(const SynthArgs& args, const RunConfig& cfg);
int run_render(const RenderArgs& args, const RunConfig& cfg);
int run_pipeline(const PipelineArgs& args, const RunConfig& cfg);

}  // namespace strumscribe::cli
