#include <random>

#include "doctest.h"
#include "strumscribe/error.hpp"
#include "strumscribe/timeline.hpp"

using namespace strumscribe;

TEST_CASE("bin_strums maps strums to per-measure positions") {
  auto binned = bin_strums(StrumSequence({1.0, 2.0, 2.5}), BarlineTrack({1.0, 3.0, 5.0}));
  REQUIRE(binned.measures.size() == 2);
  CHECK(binned.measures[0].positions == std::vector<double>{0.0, 0.5, 0.75});
  CHECK(binned.measures[1].positions.empty());
  CHECK(binned.measures[1].measure_index == 1);
  CHECK(binned.discarded == 0);

  binned = bin_strums(StrumSequence({0.5}), BarlineTrack({1.0, 3.0}));
  REQUIRE(binned.measures.size() == 1);
  CHECK(binned.measures[0].positions.empty());
  CHECK(binned.discarded == 1);

  binned = bin_strums(StrumSequence(), BarlineTrack({0.0, 2.0}));
  CHECK(binned.measures.size() == 1);
  CHECK(binned.discarded == 0);
}

TEST_CASE("a strum on a bar line starts the next measure; the final bar line is exclusive") {
  const auto binned = bin_strums(StrumSequence({0.0, 2.0, 4.0}), BarlineTrack({0.0, 2.0, 4.0}));
  CHECK(binned.measures[0].positions == std::vector<double>{0.0});
  CHECK(binned.measures[1].positions == std::vector<double>{0.0});
  CHECK(binned.discarded == 1);
}

TEST_CASE("measure_durations") {
  CHECK(measure_durations(BarlineTrack({0, 2, 4, 5})) == std::vector<double>{2, 2, 1});
  CHECK(measure_durations(BarlineTrack({0, 2})) == std::vector<double>{2});
  const auto d = measure_durations(BarlineTrack({0.0, 1.987, 3.974}));
  CHECK(d[0] == doctest::Approx(1.987));
  CHECK(d[1] == doctest::Approx(1.987));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(BarlineTrack({1.0}), ValidationError);
  CHECK_THROWS_AS(BarlineTrack({1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(BarlineTrack({2.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(StrumSequence({1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(StrumSequence({1.0, 1.0005}), ValidationError);
  CHECK_NOTHROW(StrumSequence({1.0, 1.001}));
}

TEST_CASE("binning is shift and scale invariant and partitions the strums") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bars{u(rng) * 2.0};
    for (int i = 0; i < 6; ++i) bars.push_back(bars.back() + 0.5 + u(rng) * 2.0);
    std::vector<double> strums;
    double t = bars.front() - 1.0;
    while (t < bars.back() + 1.0) {
      strums.push_back(t);
      t += 0.01 + u(rng) * 0.4;
    }
    const auto base = bin_strums(StrumSequence(strums), BarlineTrack(bars));

    std::size_t binned = 0;
    for (const auto& m : base.measures) {
      binned += m.positions.size();
      for (double p : m.positions) CHECK((p >= 0.0 && p < 1.0));
    }
    CHECK(binned + base.discarded == strums.size());

    const double shift = (u(rng) - 0.5) * 100.0;
    const double scale = 0.25 + u(rng) * 4.0;
    for (int variant = 0; variant < 2; ++variant) {
      std::vector<double> s2 = strums, b2 = bars;
      for (auto& x : s2) x = variant == 0 ? x + shift : x * scale;
      for (auto& x : b2) x = variant == 0 ? x + shift : x * scale;
      const auto other = bin_strums(StrumSequence(s2), BarlineTrack(b2));
      REQUIRE(other.measures.size() == base.measures.size());
      std::size_t other_binned = 0;
      for (std::size_t m = 0; m < base.measures.size(); ++m) {
        const auto& a = base.measures[m].positions;
        const auto& b = other.measures[m].positions;
        other_binned += b.size();
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
      }
      CHECK(other_binned + other.discarded == strums.size());
    }
  }
}
