#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "strumscribe/timeline.hpp"
#include "strumscribe/wav.hpp"

namespace strumscribe {

/// Spectral-flux onset detector settings. Window parameters are in frames.
struct OnsetConfig {
  int frame_size = 2048;
  int hop_size = 512;
  int mel_bands = 128;
  double fmin_hz = 30.0;
  double fmax_hz = 11025.0;
  /// Magnitudes are compressed as log(1 + log_gain * |X|).
  double log_gain = 1000.0;
  /// Threshold above the local mean, relative to the envelope maximum.
  double delta = 0.07;
  int pre_max = 3;
  int post_max = 3;
  int pre_avg = 10;
  int post_avg = 10;
  double min_gap_sec = 0.05;

  void validate() const;
};

/// Per-frame positive spectral flux of the log-compressed mel spectrum. Frame t
/// analyzes the frame_size samples ending half a hop after sample t * hop_size
/// (zero before the start of the audio), so an attack at sample k peaks near
/// frame k / hop_size. Throws ValidationError when the audio is shorter than a frame.
std::vector<double> onset_strength(const AudioBuffer& audio, const OnsetConfig& cfg);

/// Local-maximum peak picking on an onset envelope. Frame t is reported when it
/// is the maximum over [t - pre_max, t + post_max], exceeds the mean over
/// [t - pre_avg, t + post_avg] by `delta` (after scaling the envelope to a
/// maximum of 1) and lies at least min_gap_sec after the previous onset.
StrumSequence pick_peaks(std::span<const double> envelope, int sample_rate,
                         const OnsetConfig& cfg);

StrumSequence detect_onsets(const AudioBuffer& audio, const OnsetConfig& cfg);

struct LabeledAudio {
  AudioBuffer audio;
  StrumSequence onsets;
};

struct TuningResult {
  OnsetConfig config;
  double mean_f1 = 0.0;
};

/// Random search over the peak-picking parameters (delta, windows, gap),
/// maximizing mean onset F1 over `labeled` at `tolerance_sec`. The spectral
/// settings of `base` are kept. Deterministic for a given seed.
TuningResult tune_onset_config(std::span<const LabeledAudio> labeled, const OnsetConfig& base,
                               int trials, std::uint64_t seed, double tolerance_sec = 0.05);

}  // namespace strumscribe
