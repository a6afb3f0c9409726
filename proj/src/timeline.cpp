#include "strumscribe/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "strumscribe/error.hpp"

namespace strumscribe {

BarlineTrack::BarlineTrack(std::vector<double> times_sec) : times_(std::move(times_sec)) {
  if (times_.size() < 2) {
    throw ValidationError("a bar-line track needs at least 2 bar lines, got " +
                          std::to_string(times_.size()));
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw ValidationError("bar-line times must be finite");
    if (i > 0 && !(times_[i - 1] < times_[i])) {
      throw ValidationError("bar-line times must be strictly ascending (index " +
                            std::to_string(i) + ")");
    }
  }
}

StrumSequence::StrumSequence(std::vector<double> times_sec) : times_(std::move(times_sec)) {
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw ValidationError("strum times must be finite");
    if (i == 0) continue;
    if (times_[i] < times_[i - 1]) {
      throw ValidationError("strum times must be ascending (index " + std::to_string(i) + ")");
    }
    if (times_[i] - times_[i - 1] < kMinStrumSpacingSec - 1e-9) {
      throw ValidationError("strums closer than 1 ms (index " + std::to_string(i) + ")");
    }
  }
}

BinnedStrums bin_strums(const StrumSequence& strums, const BarlineTrack& bars) {
  BinnedStrums out;
  out.measures.resize(bars.measure_count());
  for (std::size_t m = 0; m < out.measures.size(); ++m) out.measures[m].measure_index = m;

  const auto& lines = bars.times();
  for (double t : strums.times()) {
    if (t < lines.front() || t >= lines.back()) {
      ++out.discarded;
      continue;
    }
    // First bar line strictly after t closes the measure containing t.
    const auto upper = std::upper_bound(lines.begin(), lines.end(), t);
    const auto m = static_cast<std::size_t>(upper - lines.begin()) - 1;
    double pos = (t - bars.start(m)) / bars.duration(m);
    // Rounding can push a strum just below the closing bar line onto 1.0.
    pos = std::clamp(pos, 0.0, std::nextafter(1.0, 0.0));
    out.measures[m].positions.push_back(pos);
  }
  return out;
}

std::vector<double> measure_durations(const BarlineTrack& bars) {
  std::vector<double> out(bars.measure_count());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = bars.duration(m);
  return out;
}

}  // namespace strumscribe
