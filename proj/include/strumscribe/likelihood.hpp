#pragma once

#include <compare>
#include <limits>
#include <span>

#include "strumscribe/timeline.hpp"
#include "strumscribe/vocabulary.hpp"

namespace strumscribe {

enum class TieBreak {
  /// Among equal-cost choices keep the current pattern, otherwise take the
  /// lowest vocabulary index.
  PreferStayThenLowestIndex,
};

/// Parameters of the decoding cost. `sigma` is the strum timing standard
/// deviation in measure-fraction units; `c1` is charged for every pattern change
/// and `c2` additionally when the time signature changes.
struct DecoderConfig {
  double sigma = 0.03;
  double c1 = 2.0;
  double c2 = 6.0;
  TieBreak tie_break = TieBreak::PreferStayThenLowestIndex;

  void validate() const;
};

/// Minimized emission cost, or FORBIDDEN when a pattern cannot explain a measure
/// at all (exactly one of pattern and measure is empty). FORBIDDEN orders after
/// every finite cost.
class EmissionCost {
 public:
  constexpr EmissionCost() = default;
  constexpr explicit EmissionCost(double value) : value_(value) {}
  static constexpr EmissionCost forbidden() {
    EmissionCost c;
    c.forbidden_ = true;
    return c;
  }

  constexpr bool is_forbidden() const { return forbidden_; }
  /// Throws std::logic_error when forbidden.
  double value() const;

  EmissionCost& operator+=(const EmissionCost& other);
  friend EmissionCost operator+(EmissionCost a, const EmissionCost& b) { return a += b; }

  std::partial_ordering operator<=>(const EmissionCost& other) const;
  bool operator==(const EmissionCost& other) const = default;

 private:
  double value_ = 0.0;
  bool forbidden_ = false;
};

/// Two-way mismatch: sum over observed strums of the squared distance to the
/// nearest pattern onset, plus the same from each pattern onset to the nearest
/// observed strum. Both inputs must be ascending. Returns 0 when either side is
/// empty; the empty-measure rules live in measure_emission_cost.
double raw_mismatch(std::span<const double> observed, std::span<const double> pattern);

/// Cost of one pattern measure against one observed measure, with the empty
/// rules applied.
EmissionCost measure_emission_cost(std::span<const double> observed,
                                   std::span<const double> pattern_measure,
                                   const DecoderConfig& cfg);

/// Cost of `pattern` covering `span` (one MeasureStrums per pattern measure).
/// Throws ValidationError when the span length differs from the pattern length.
EmissionCost emission_cost(std::span<const MeasureStrums> span, const RhythmicPattern& pattern,
                           const DecoderConfig& cfg);

/// 0 for the same pattern, c1 for a different pattern in the same time
/// signature, c1 + c2 otherwise.
double transition_cost(const RhythmicPattern& prev, const RhythmicPattern& next,
                       const DecoderConfig& cfg);

}  // namespace strumscribe
