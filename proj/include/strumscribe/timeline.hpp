#pragma once

#include <cstddef>
#include <vector>

namespace strumscribe {

/// Bar-line times in seconds. Measure m is the half-open interval
/// [times[m], times[m+1]).
class BarlineTrack {
 public:
  /// Throws ValidationError unless there are at least two strictly ascending finite times.
  explicit BarlineTrack(std::vector<double> times_sec);

  const std::vector<double>& times() const { return times_; }
  std::size_t measure_count() const { return times_.size() - 1; }
  double start(std::size_t measure) const { return times_[measure]; }
  double end(std::size_t measure) const { return times_[measure + 1]; }
  double duration(std::size_t measure) const { return times_[measure + 1] - times_[measure]; }

  bool operator==(const BarlineTrack&) const = default;

 private:
  std::vector<double> times_;
};

/// Minimum spacing between two strums of a sequence.
inline constexpr double kMinStrumSpacingSec = 0.001;

/// Strum onset times in seconds, ascending, no two closer than 1 ms.
class StrumSequence {
 public:
  StrumSequence() = default;
  explicit StrumSequence(std::vector<double> times_sec);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  bool operator==(const StrumSequence&) const = default;

 private:
  std::vector<double> times_;
};

/// Strums of one measure as fractions of the measure length.
struct MeasureStrums {
  std::size_t measure_index = 0;
  std::vector<double> positions;

  bool operator==(const MeasureStrums&) const = default;
};

struct BinnedStrums {
  std::vector<MeasureStrums> measures;  // one per bar-line measure
  std::size_t discarded = 0;            // strums outside [first bar line, last bar line)
};

BinnedStrums bin_strums(const StrumSequence& strums, const BarlineTrack& bars);

std::vector<double> measure_durations(const BarlineTrack& bars);

}  // namespace strumscribe
