#pragma once

#include <string>
#include <vector>

#include "strumscribe/decoder.hpp"
#include "strumscribe/vocabulary.hpp"

namespace strumscribe {

struct RenderOptions {
  bool use_repeat_symbol = true;
  /// Grid slots per measure.
  int grid_resolution = 16;
  bool show_pattern_ids = false;

  void validate() const;
};

struct RenderResult {
  std::string text;
  /// One message per onset that does not sit exactly on the grid.
  std::vector<std::string> warnings;
};

/// Slash-notation-like text: `4/4 | x...x... | % | % |`.
///
/// Each measure is a `|`-delimited cell of grid slots, `x` for an attack and `.`
/// otherwise. A time-signature marker precedes the first measure and every
/// measure whose signature differs from its predecessor. A pattern occurrence
/// that repeats the immediately preceding occurrence is written `%`, or `%%`
/// in a single cell standing for both measures of a 2-measure pattern.
RenderResult render_text(const Transcription& t, const Vocabulary& vocab, const RenderOptions& opts);

}  // namespace strumscribe
