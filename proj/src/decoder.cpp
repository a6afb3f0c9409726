#include "strumscribe/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "strumscribe/error.hpp"

namespace strumscribe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double cost = kInf;
  int index = -1;

  bool valid() const { return index >= 0; }
};

// Lower cost wins; within tolerance the lower pattern index wins.
bool better(const Candidate& a, const Candidate& b) {
  if (!a.valid()) return false;
  if (!b.valid()) return true;
  if (costs_tie(a.cost, b.cost)) return a.index < b.index;
  return a.cost < b.cost;
}

// Best and runner-up of one time-signature group within a row of the DP.
struct GroupBest {
  Candidate first;
  Candidate second;

  void offer(const Candidate& c) {
    if (better(c, first)) {
      second = first;
      first = c;
    } else if (better(c, second)) {
      second = c;
    }
  }
};

// Per-row summary letting each pattern find its cheapest predecessor in O(1):
// transition cost depends only on pattern identity and time-signature identity.
class RowSummary {
 public:
  RowSummary(std::span<const double> row, std::span<const int> group_of, std::size_t groups)
      : row_(row), groups_(groups) {
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (std::isfinite(row[p])) {
        groups_[static_cast<std::size_t>(group_of[p])].offer({row[p], static_cast<int>(p)});
      }
    }
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      Candidate c = groups_[g].first;
      if (!c.valid()) continue;
      if (better(c, top_[0].best)) {
        top_[1] = top_[0];
        top_[0] = {c, static_cast<int>(g)};
      } else if (better(c, top_[1].best)) {
        top_[1] = {c, static_cast<int>(g)};
      }
    }
  }

  // Cheapest predecessor for a pattern `p` in group `g` starting right after this row.
  Candidate predecessor(int p, int g, const DecoderConfig& cfg) const {
    Candidate chosen;
    const double stay = row_[static_cast<std::size_t>(p)];
    if (std::isfinite(stay)) chosen = {stay, p};

    const auto consider = [&](Candidate c, double penalty) {
      if (!c.valid()) return;
      c.cost += penalty;
      if (!chosen.valid()) {
        chosen = c;
        return;
      }
      if (costs_tie(c.cost, chosen.cost)) {
        // Staying wins every tie; otherwise the lower index.
        if (chosen.index != p && c.index < chosen.index) chosen = c;
      } else if (c.cost < chosen.cost) {
        chosen = c;
      }
    };

    const GroupBest& own = groups_[static_cast<std::size_t>(g)];
    consider(own.first.index == p ? own.second : own.first, cfg.c1);
    const Candidate other = top_[0].group == g ? top_[1].best : top_[0].best;
    consider(other, cfg.c1 + cfg.c2);
    return chosen;
  }

 private:
  struct TopGroup {
    Candidate best;
    int group = -1;
  };

  std::span<const double> row_;
  std::vector<GroupBest> groups_;
  TopGroup top_[2];
};

}  // namespace

void validate_transcription(const Transcription& t, const Vocabulary& vocab) {
  for (std::size_t i = 0; i < t.entries.size();) {
    const auto& head = t.entries[i];
    const auto& pattern = vocab.at(head.pattern_id);
    if (head.time_signature != pattern.time_signature) {
      throw ValidationError("measure " + std::to_string(i) + ": time signature " +
                            head.time_signature.to_string() + " does not match pattern '" +
                            pattern.id + "'");
    }
    for (int k = 0; k < pattern.measures(); ++k) {
      if (i + static_cast<std::size_t>(k) >= t.entries.size()) {
        throw ValidationError("pattern '" + pattern.id + "' is cut off by the end of the song");
      }
      const auto& e = t.entries[i + static_cast<std::size_t>(k)];
      if (e.pattern_id != pattern.id || e.phase != k) {
        throw ValidationError("measure " + std::to_string(i + static_cast<std::size_t>(k)) +
                              ": inconsistent pattern phase");
      }
    }
    i += static_cast<std::size_t>(pattern.measures());
  }
}

Transcription decode(std::span<const MeasureStrums> measures, const Vocabulary& vocab,
                     const DecoderConfig& cfg) {
  cfg.validate();
  if (measures.empty()) throw ValidationError("cannot decode an empty measure list");
  if (vocab.empty()) throw ValidationError("cannot decode with an empty vocabulary");

  const std::size_t n_measures = measures.size();
  const std::size_t n_patterns = vocab.size();

  std::vector<int> group_of(n_patterns);
  for (std::size_t p = 0; p < n_patterns; ++p) {
    const auto& sigs = vocab.signatures();
    group_of[p] = static_cast<int>(
        std::find(sigs.begin(), sigs.end(), vocab[p].time_signature) - sigs.begin());
  }

  // emission[m * P + p]: cost of pattern p starting at measure m (inf if forbidden
  // or if the pattern would run past the end of the song).
  std::vector<double> emission(n_measures * n_patterns, kInf);
  for (std::size_t m = 0; m < n_measures; ++m) {
    for (std::size_t p = 0; p < n_patterns; ++p) {
      const auto len = static_cast<std::size_t>(vocab[p].measures());
      if (m + len > n_measures) continue;
      const EmissionCost c = emission_cost(measures.subspan(m, len), vocab[p], cfg);
      if (!c.is_forbidden()) emission[m * n_patterns + p] = c.value();
    }
  }

  // best[m * P + p]: cheapest covering of measures [0, m] whose last pattern is p
  // ending at m. back holds the pattern ending just before p starts (-1 at song start).
  std::vector<double> best(n_measures * n_patterns, kInf);
  std::vector<int> back(n_measures * n_patterns, -1);
  const std::size_t n_groups = vocab.signatures().size();
  std::vector<RowSummary> summaries;
  summaries.reserve(n_measures);

  for (std::size_t m = 0; m < n_measures; ++m) {
    for (std::size_t p = 0; p < n_patterns; ++p) {
      const auto len = static_cast<std::size_t>(vocab[p].measures());
      if (m + 1 < len) continue;
      const std::size_t start = m + 1 - len;
      const double e = emission[start * n_patterns + p];
      if (!std::isfinite(e)) continue;
      if (start == 0) {
        best[m * n_patterns + p] = e;
        continue;
      }
      const Candidate pred = summaries[start - 1].predecessor(static_cast<int>(p), group_of[p], cfg);
      if (!pred.valid()) continue;
      best[m * n_patterns + p] = pred.cost + e;
      back[m * n_patterns + p] = pred.index;
    }
    summaries.emplace_back(std::span<const double>(best).subspan(m * n_patterns, n_patterns),
                           group_of, n_groups);
  }

  Candidate final_state;
  for (std::size_t p = 0; p < n_patterns; ++p) {
    const double v = best[(n_measures - 1) * n_patterns + p];
    if (std::isfinite(v)) {
      const Candidate c{v, static_cast<int>(p)};
      if (better(c, final_state)) final_state = c;
    }
  }
  if (!final_state.valid()) {
    throw DecodeError("no pattern sequence covers all " + std::to_string(n_measures) +
                      " measures with the given vocabulary");
  }

  Transcription out;
  out.total_cost = final_state.cost;
  out.entries.resize(n_measures);
  int p = final_state.index;
  std::size_t end = n_measures - 1;
  while (true) {
    const auto& pattern = vocab[static_cast<std::size_t>(p)];
    const auto len = static_cast<std::size_t>(pattern.measures());
    const std::size_t start = end + 1 - len;
    const int prev = back[end * n_patterns + static_cast<std::size_t>(p)];
    for (std::size_t k = 0; k < len; ++k) {
      auto& entry = out.entries[start + k];
      entry.measure_index = measures[start + k].measure_index;
      entry.pattern_id = pattern.id;
      entry.phase = static_cast<int>(k);
      entry.time_signature = pattern.time_signature;
      entry.emission =
          measure_emission_cost(measures[start + k].positions, pattern.onsets[k], cfg).value();
      entry.transition =
          (k == 0 && prev >= 0) ? transition_cost(vocab[static_cast<std::size_t>(prev)], pattern, cfg)
                                : 0.0;
    }
    if (start == 0) break;
    p = prev;
    end = start - 1;
  }
  return out;
}

StrumSequence reconstruct_strums(const Transcription& t, const BarlineTrack& bars,
                                 const Vocabulary& vocab) {
  if (t.entries.size() != bars.measure_count()) {
    throw ValidationError("transcription covers " + std::to_string(t.entries.size()) +
                          " measures but the bar-line track has " +
                          std::to_string(bars.measure_count()));
  }
  std::vector<double> times;
  for (std::size_t m = 0; m < t.entries.size(); ++m) {
    const auto& entry = t.entries[m];
    const auto& pattern = vocab.at(entry.pattern_id);
    if (entry.phase < 0 || entry.phase >= pattern.measures()) {
      throw ValidationError("measure " + std::to_string(m) + ": phase out of range");
    }
    for (double pos : pattern.onsets[static_cast<std::size_t>(entry.phase)]) {
      times.push_back(bars.start(m) + pos * bars.duration(m));
    }
  }
  std::sort(times.begin(), times.end());
  return StrumSequence(std::move(times));
}

}  // namespace strumscribe
