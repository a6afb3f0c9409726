#include "strumscribe/metrics.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include "strumscribe/barlines.hpp"
#include "strumscribe/error.hpp"

namespace strumscribe {

namespace {

// Hopcroft-Karp maximum bipartite matching; left vertices are references.
class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right, std::vector<std::vector<std::size_t>> adj)
      : adj_(std::move(adj)), match_left_(left, kNone), match_right_(right, kNone), dist_(left) {}

  std::size_t run() {
    std::size_t matched = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        if (match_left_[u] == kNone && dfs(u)) ++matched;
      }
    }
    return matched;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<std::size_t> queue;
    bool reachable_free = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (match_left_[u] == kNone) {
        dist_[u] = 0;
        queue.push(u);
      } else {
        dist_[u] = kNone;
      }
    }
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_right_[v];
        if (w == kNone) {
          reachable_free = true;
        } else if (dist_[w] == kNone) {
          dist_[w] = dist_[u] + 1;
          queue.push(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_right_[v];
      if (w == kNone || (dist_[w] == dist_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    dist_[u] = kNone;
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> dist_;
};

double ratio_or_one(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MatchResult match_events(std::span<const double> reference, std::span<const double> estimate,
                         double tolerance_sec) {
  if (!(tolerance_sec > 0.0)) throw ValidationError("matching tolerance must be > 0");
  // Absorbs representation error for distances that equal the tolerance exactly.
  const double window = tolerance_sec + 1e-9;

  // Both lists are ascending, so each reference sees a contiguous estimate window.
  std::vector<std::vector<std::size_t>> adj(reference.size());
  std::size_t lo = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    while (lo < estimate.size() && estimate[lo] < reference[i] - window) ++lo;
    for (std::size_t j = lo; j < estimate.size() && estimate[j] <= reference[i] + window; ++j) {
      adj[i].push_back(j);
    }
  }

  MatchResult r;
  r.true_positives = HopcroftKarp(reference.size(), estimate.size(), std::move(adj)).run();
  r.false_positives = estimate.size() - r.true_positives;
  r.false_negatives = reference.size() - r.true_positives;
  r.precision = ratio_or_one(r.true_positives, estimate.size());
  r.recall = ratio_or_one(r.true_positives, reference.size());
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

double pattern_discontinuity(const Transcription& t) {
  if (t.entries.empty()) return 0.0;
  std::size_t changes = 0;
  const std::string* previous = nullptr;
  for (const auto& e : t.entries) {
    if (e.phase != 0) continue;
    if (previous != nullptr && *previous != e.pattern_id) ++changes;
    previous = &e.pattern_id;
  }
  return static_cast<double>(changes) / static_cast<double>(t.entries.size());
}

double timesig_discontinuity(const Transcription& t) {
  if (t.entries.empty()) return 0.0;
  std::size_t changes = 0;
  for (std::size_t m = 1; m < t.entries.size(); ++m) {
    if (t.entries[m].time_signature != t.entries[m - 1].time_signature) ++changes;
  }
  return static_cast<double>(changes) / static_cast<double>(t.entries.size());
}

EvaluationReport evaluate_transcription(const Transcription& t, const BarlineTrack& bars,
                                        const Vocabulary& vocab,
                                        const StrumSequence& ground_truth, double tolerance_sec) {
  const StrumSequence reconstructed = reconstruct_strums(t, bars, vocab);
  EvaluationReport report;
  report.strums = match_events(ground_truth.times(), reconstructed.times(), tolerance_sec);
  report.pattern_disc = pattern_discontinuity(t);
  report.timesig_disc = timesig_discontinuity(t);
  report.measure_disc = discontinuity_rate(bars);
  return report;
}

MetricSummary mean_and_sem(std::span<const double> values) {
  MetricSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

AggregateReport aggregate(std::span<const EvaluationReport> reports) {
  AggregateReport agg;
  agg.songs = reports.size();
  const auto summarize = [&](auto field) {
    std::vector<double> values;
    values.reserve(reports.size());
    for (const auto& r : reports) values.push_back(field(r));
    return mean_and_sem(values);
  };
  agg.f1 = summarize([](const EvaluationReport& r) { return r.strums.f1; });
  agg.precision = summarize([](const EvaluationReport& r) { return r.strums.precision; });
  agg.recall = summarize([](const EvaluationReport& r) { return r.strums.recall; });
  agg.pattern_disc = summarize([](const EvaluationReport& r) { return r.pattern_disc; });
  agg.timesig_disc = summarize([](const EvaluationReport& r) { return r.timesig_disc; });
  agg.measure_disc = summarize([](const EvaluationReport& r) { return r.measure_disc; });
  return agg;
}

}  // namespace strumscribe
