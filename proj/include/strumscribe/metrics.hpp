#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "strumscribe/decoder.hpp"
#include "strumscribe/timeline.hpp"
#include "strumscribe/vocabulary.hpp"

namespace strumscribe {

inline constexpr double kStrumToleranceSec = 0.05;
inline constexpr double kBarlineToleranceSec = 0.07;

struct MatchResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

/// Tolerance-window event matching: TP is the size of a maximum one-to-one
/// matching between reference and estimated events with |ref - est| <= tolerance.
MatchResult match_events(std::span<const double> reference, std::span<const double> estimate,
                         double tolerance_sec);

/// Pattern changes (counted at pattern starts) divided by the number of measures.
double pattern_discontinuity(const Transcription& t);
/// Time-signature changes between consecutive measures divided by the number of measures.
double timesig_discontinuity(const Transcription& t);

struct EvaluationReport {
  MatchResult strums;
  double pattern_disc = 0.0;
  double timesig_disc = 0.0;
  double measure_disc = 0.0;
};

EvaluationReport evaluate_transcription(const Transcription& t, const BarlineTrack& bars,
                                        const Vocabulary& vocab,
                                        const StrumSequence& ground_truth,
                                        double tolerance_sec = kStrumToleranceSec);

struct MetricSummary {
  double mean = 0.0;
  double sem = 0.0;  // standard error of the mean, sample std / sqrt(n)
};

MetricSummary mean_and_sem(std::span<const double> values);

struct AggregateReport {
  std::size_t songs = 0;
  MetricSummary f1, precision, recall, pattern_disc, timesig_disc, measure_disc;
};

AggregateReport aggregate(std::span<const EvaluationReport> reports);

}  // namespace strumscribe
