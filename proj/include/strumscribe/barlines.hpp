#pragma once

#include <cstddef>
#include <vector>

#include "strumscribe/timeline.hpp"

namespace strumscribe {

/// Tuning of the bar-line cleanup.
struct PostprocConfig {
  std::vector<int> subdivision_factors{1, 2, 3, 4};
  double deletion_penalty = 1.0;
  /// Cost per bar line inserted by subdividing a span.
  double insertion_penalty = 1.0;
  double tempo_change_penalty = 8.0;
  /// A deleted estimate this close to a kept one counts as a duplicate
  /// detection and costs nothing.
  double snap_tolerance_sec = 0.07;
  /// Relative measure-length change that is not penalized.
  double tempo_free_band = 0.05;
  /// How many estimates ahead the next kept estimate may lie (>= 1).
  std::size_t lookahead = 4;

  void validate() const;
};

struct PostprocResult {
  BarlineTrack track;
  double cost = 0.0;
  std::vector<std::size_t> kept;  // indices into the raw estimates
  std::vector<int> factors;       // subdivision factor of each kept span
};

/// Steady-tempo cleanup of raw downbeat estimates.
///
/// Keeps a subsequence of the estimates (first and last always kept) and splits
/// each span between consecutive kept estimates into k equal measures, k from
/// `subdivision_factors`. The choice minimizes
///   deletion_penalty * (deleted estimates, duplicates excluded)
///   + insertion_penalty * (inserted bar lines)
///   + tempo_change_penalty * sum max(0, |len_m - len_{m-1}| / len_{m-1} - free_band)
/// over consecutive output measure lengths.
PostprocResult postprocess_barlines_detailed(const BarlineTrack& raw, const PostprocConfig& cfg);
BarlineTrack postprocess_barlines(const BarlineTrack& raw, const PostprocConfig& cfg);

/// Penalty between two consecutive measure lengths.
double tempo_change_cost(double previous_len, double len, const PostprocConfig& cfg);

/// Fraction of measures whose length differs by more than 35% from the
/// previous measure. Zero for tracks with fewer than two measures.
double discontinuity_rate(const BarlineTrack& bars);

inline constexpr double kDiscontinuityThreshold = 0.35;

}  // namespace strumscribe
