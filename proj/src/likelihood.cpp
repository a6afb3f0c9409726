#include "strumscribe/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "strumscribe/error.hpp"

namespace strumscribe {

void DecoderConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be > 0");
  if (!(c1 >= 0.0) || !std::isfinite(c1)) throw ValidationError("c1 must be >= 0");
  if (!(c2 >= 0.0) || !std::isfinite(c2)) throw ValidationError("c2 must be >= 0");
}

double EmissionCost::value() const {
  if (forbidden_) throw std::logic_error("value() of a FORBIDDEN emission cost");
  return value_;
}

EmissionCost& EmissionCost::operator+=(const EmissionCost& other) {
  if (forbidden_ || other.forbidden_) {
    *this = forbidden();
  } else {
    value_ += other.value_;
  }
  return *this;
}

std::partial_ordering EmissionCost::operator<=>(const EmissionCost& other) const {
  if (forbidden_ || other.forbidden_) {
    return forbidden_ == other.forbidden_ ? std::partial_ordering::equivalent
           : forbidden_                   ? std::partial_ordering::greater
                                          : std::partial_ordering::less;
  }
  return value_ <=> other.value_;
}

namespace {

// Squared distance from each element of `from` to its nearest element of `to`.
double one_way(std::span<const double> from, std::span<const double> to) {
  double sum = 0.0;
  for (double x : from) {
    const auto it = std::lower_bound(to.begin(), to.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != to.end()) d = *it - x;
    if (it != to.begin()) d = std::min(d, x - *(it - 1));
    sum += d * d;
  }
  return sum;
}

}  // namespace

double raw_mismatch(std::span<const double> observed, std::span<const double> pattern) {
  if (observed.empty() || pattern.empty()) return 0.0;
  return one_way(observed, pattern) + one_way(pattern, observed);
}

EmissionCost measure_emission_cost(std::span<const double> observed,
                                   std::span<const double> pattern_measure,
                                   const DecoderConfig& cfg) {
  if (observed.empty() && pattern_measure.empty()) return EmissionCost(0.0);
  if (observed.empty() || pattern_measure.empty()) return EmissionCost::forbidden();
  return EmissionCost(raw_mismatch(observed, pattern_measure) / (2.0 * cfg.sigma * cfg.sigma));
}

EmissionCost emission_cost(std::span<const MeasureStrums> span, const RhythmicPattern& pattern,
                           const DecoderConfig& cfg) {
  if (static_cast<int>(span.size()) != pattern.measures()) {
    throw ValidationError("emission span covers " + std::to_string(span.size()) +
                          " measures but pattern '" + pattern.id + "' has " +
                          std::to_string(pattern.measures()));
  }
  EmissionCost total(0.0);
  for (std::size_t k = 0; k < span.size(); ++k) {
    total += measure_emission_cost(span[k].positions, pattern.onsets[k], cfg);
    if (total.is_forbidden()) break;
  }
  return total;
}

double transition_cost(const RhythmicPattern& prev, const RhythmicPattern& next,
                       const DecoderConfig& cfg) {
  if (prev.id == next.id) return 0.0;
  if (prev.time_signature == next.time_signature) return cfg.c1;
  return cfg.c1 + cfg.c2;
}

}  // namespace strumscribe
