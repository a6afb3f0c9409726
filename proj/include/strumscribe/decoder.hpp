#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "strumscribe/likelihood.hpp"
#include "strumscribe/timeline.hpp"
#include "strumscribe/vocabulary.hpp"

namespace strumscribe {

struct TranscriptionEntry {
  std::size_t measure_index = 0;
  std::string pattern_id;
  int phase = 0;  // which measure of the pattern this measure is
  TimeSignature time_signature;
  // Cost contributions attributed to this measure. Not part of the file format.
  double emission = 0.0;
  double transition = 0.0;
};

/// One entry per measure, in measure order.
struct Transcription {
  std::vector<TranscriptionEntry> entries;
  double total_cost = 0.0;

  std::size_t size() const { return entries.size(); }
};

/// Throws ValidationError unless every entry names a pattern of `vocab` with a
/// matching time signature and phases run 0,1 for 2-measure patterns and 0 for
/// 1-measure patterns, covering every measure.
void validate_transcription(const Transcription& t, const Vocabulary& vocab);

/// Minimum-cost pattern sequence covering `measures`.
///
/// A 1-measure pattern at measure m costs its emission on m; a 2-measure pattern
/// starting at m costs its emission on m and m+1 and cannot start at the final
/// measure. A transition cost is charged between consecutive pattern starts and
/// never before the first. Equal-cost alternatives are resolved by keeping the
/// current pattern, then by the lowest vocabulary index.
///
/// Throws ValidationError for an empty measure list or invalid config and
/// DecodeError when no covering sequence exists.
Transcription decode(std::span<const MeasureStrums> measures, const Vocabulary& vocab,
                     const DecoderConfig& cfg);

/// Writes the transcription's patterns out onto the bar-line grid.
StrumSequence reconstruct_strums(const Transcription& t, const BarlineTrack& bars,
                                 const Vocabulary& vocab);

/// Tolerance used when comparing accumulated costs for ties.
inline bool costs_tie(double a, double b) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  const double diff = a - b;
  return (diff < 0 ? -diff : diff) <= 1e-9 * scale;
}

}  // namespace strumscribe
