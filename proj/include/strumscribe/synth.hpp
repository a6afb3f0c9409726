#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "strumscribe/decoder.hpp"
#include "strumscribe/timeline.hpp"
#include "strumscribe/vocabulary.hpp"
#include "strumscribe/wav.hpp"

namespace strumscribe {

/// Parameters of a synthetic song. Rates are per nominal strum.
struct SynthSpec {
  std::uint64_t seed = 0;
  double tempo_bpm = 120.0;
  std::size_t measures = 32;
  /// Timing jitter standard deviation in measure-fraction units.
  double sigma_norm = 0.0;
  /// Probability that a new pattern occurrence switches to a different pattern.
  double switch_prob = 0.1;
  double spurious_rate = 0.0;
  double miss_rate = 0.0;
  /// Probability that a pattern occurrence is replaced by a silent measure.
  double rest_prob = 0.0;

  void validate() const;
};

struct SynthSong {
  Transcription ground_truth;
  BarlineTrack bars;
  StrumSequence nominal;
  StrumSequence observed;
};

/// Draws a Markov pattern sequence from the non-empty patterns of `vocab`,
/// lays bar lines at the tempo implied by each pattern's time signature and
/// writes the strums out. Observed strums get truncated Gaussian jitter
/// (within +-3 sigma and inside their own measure), random deletions and
/// uniformly placed spurious strums. Fully determined by `spec.seed`.
SynthSong generate_song(const SynthSpec& spec, const Vocabulary& vocab);

/// Exponentially decaying white-noise bursts starting at `onsets_sec`, a
/// stand-in for isolated strummed guitar.
AudioBuffer render_pluck_train(std::span<const double> onsets_sec, double duration_sec,
                               int sample_rate, std::uint64_t seed, double amplitude = 0.5,
                               double decay_sec = 0.08);

}  // namespace strumscribe
