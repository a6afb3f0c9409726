#include <random>

#include "doctest.h"
#include "strumscribe/error.hpp"
#include "strumscribe/metrics.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace strumscribe;

namespace {

Transcription from_ids(const Vocabulary& vocab, const std::vector<std::string>& ids) {
  Transcription t;
  for (std::size_t m = 0; m < ids.size();) {
    const auto& p = vocab.at(ids[m]);
    for (int k = 0; k < p.measures(); ++k, ++m) {
      t.entries.push_back({m, p.id, k, p.time_signature});
    }
  }
  return t;
}

std::vector<double> random_events(std::mt19937_64& rng, int max_count) {
  std::uniform_int_distribution<int> count(0, max_count);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::vector<double> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) out.push_back(t(rng));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("tolerance-window matching examples") {
  const std::vector<double> ref{1.0, 2.0, 3.0};
  auto r = match_events(ref, std::vector<double>{1.02, 2.2, 3.0}, 0.05);
  CHECK(r.true_positives == 2);
  CHECK(r.false_positives == 1);
  CHECK(r.false_negatives == 1);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0));
  CHECK(r.recall == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx(2.0 / 3.0));

  // One estimate can match at most one reference.
  r = match_events(std::vector<double>{1.0, 1.04}, std::vector<double>{1.02}, 0.05);
  CHECK(r.true_positives == 1);
  CHECK(r.recall == doctest::Approx(0.5));
  CHECK(r.precision == 1.0);

  // A greedy earliest-first matcher would find only one pair here.
  r = match_events(std::vector<double>{1.0, 1.08}, std::vector<double>{1.04, 0.97}, 0.05);
  CHECK(r.true_positives == 2);
}

TEST_CASE("matching on empty inputs") {
  const std::vector<double> none;
  const std::vector<double> some{0.5};
  auto r = match_events(none, none, 0.05);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  r = match_events(none, some, 0.05);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 1.0);
  r = match_events(some, none, 0.05);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f1 == 0.0);
}

TEST_CASE("matching agrees with exhaustive maximum matching") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = random_events(rng, 12);
    const auto est = random_events(rng, 12);
    const double tol = trial % 2 == 0 ? 0.05 : 0.1;
    CHECK(match_events(ref, est, tol).true_positives == oracle::max_matching(ref, est, tol));
  }
}

TEST_CASE("swapping reference and estimate swaps precision and recall") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_events(rng, 15);
    const auto b = random_events(rng, 15);
    const auto ab = match_events(a, b, 0.05);
    const auto ba = match_events(b, a, 0.05);
    CHECK(ab.true_positives == ba.true_positives);
    CHECK(ab.precision == doctest::Approx(ba.recall));
    CHECK(ab.recall == doctest::Approx(ba.precision));
    CHECK(ab.f1 == doctest::Approx(ba.f1));
  }
}

TEST_CASE("true positives never decrease as the tolerance widens") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_events(rng, 15);
    const auto b = random_events(rng, 15);
    std::size_t previous = 0;
    for (double tol : {0.001, 0.01, 0.03, 0.05, 0.1, 0.2, 1.0}) {
      const auto tp = match_events(a, b, tol).true_positives;
      CHECK(tp >= previous);
      previous = tp;
    }
  }
}

TEST_CASE("discontinuity metrics") {
  const auto vocab = corpus::mixed_vocabulary();
  CHECK(pattern_discontinuity(from_ids(vocab, {"quarters", "quarters", "eighths", "eighths"})) ==
        doctest::Approx(0.25));
  CHECK(pattern_discontinuity(from_ids(vocab, {"quarters", "eighths", "quarters", "eighths"})) ==
        doctest::Approx(0.75));
  CHECK(timesig_discontinuity(from_ids(vocab, {"quarters", "quarters", "waltz", "waltz"})) ==
        doctest::Approx(0.25));
  // A 2-measure pattern repeating is not a change.
  CHECK(pattern_discontinuity(from_ids(vocab, {"calypso_2bar", "calypso_2bar", "calypso_2bar",
                                               "calypso_2bar"})) == 0.0);
  // 6 pattern changes over 25 measures: on average one change every 1/0.24 measures.
  std::vector<std::string> ids;
  for (int block = 0; block < 7; ++block) {
    for (int k = 0; k < (block < 6 ? 4 : 1); ++k) ids.push_back(block % 2 == 0 ? "quarters" : "eighths");
  }
  const double rate = pattern_discontinuity(from_ids(vocab, ids));
  CHECK(rate == doctest::Approx(0.24));
  CHECK(1.0 / rate == doctest::Approx(4.1667).epsilon(1e-3));
}

TEST_CASE("evaluate_transcription compares reconstructed strums with ground truth") {
  const auto vocab = corpus::vocabulary_44();
  const auto t = from_ids(vocab, {"halves", "halves"});
  const BarlineTrack bars({0.0, 2.0, 4.0});
  const auto report = evaluate_transcription(t, bars, vocab, StrumSequence({0.0, 1.02, 2.0, 3.5}));
  CHECK(report.strums.true_positives == 3);
  CHECK(report.strums.false_positives == 1);
  CHECK(report.strums.false_negatives == 1);
  CHECK(report.pattern_disc == 0.0);
  CHECK(report.measure_disc == 0.0);
}

TEST_CASE("mean and standard error") {
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  const auto s = mean_and_sem(values);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(mean_and_sem(std::vector<double>{7.0}).sem == 0.0);
  CHECK(mean_and_sem(std::vector<double>{}).mean == 0.0);

  std::vector<EvaluationReport> reports(2);
  reports[0].strums.f1 = 1.0;
  reports[1].strums.f1 = 0.5;
  const auto agg = aggregate(reports);
  CHECK(agg.songs == 2);
  CHECK(agg.f1.mean == doctest::Approx(0.75));
  CHECK(agg.f1.sem == doctest::Approx(0.25));
}

TEST_CASE("one matched strum out of two gives F1 one half") {
  const auto r = match_events(std::vector<double>{1.0, 2.0}, std::vector<double>{1.03, 2.2}, 0.05);
  CHECK(r.f1 == 0.5);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
}
