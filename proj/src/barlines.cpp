#include "strumscribe/barlines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "strumscribe/error.hpp"

namespace strumscribe {

void PostprocConfig::validate() const {
  if (subdivision_factors.empty()) throw ValidationError("subdivision_factors must not be empty");
  for (int k : subdivision_factors) {
    if (k < 1) throw ValidationError("subdivision factors must be >= 1");
  }
  if (!(deletion_penalty >= 0.0)) throw ValidationError("deletion_penalty must be >= 0");
  if (!(insertion_penalty >= 0.0)) throw ValidationError("insertion_penalty must be >= 0");
  if (!(tempo_change_penalty >= 0.0)) throw ValidationError("tempo_change_penalty must be >= 0");
  if (!(snap_tolerance_sec > 0.0)) throw ValidationError("snap_tolerance_sec must be > 0");
  if (!(tempo_free_band >= 0.0)) throw ValidationError("tempo_free_band must be >= 0");
  if (lookahead < 1) throw ValidationError("lookahead must be >= 1");
}

double tempo_change_cost(double previous_len, double len, const PostprocConfig& cfg) {
  const double rel = std::abs(len - previous_len) / previous_len;
  return cfg.tempo_change_penalty * std::max(0.0, rel - cfg.tempo_free_band);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cost of deleting the estimates strictly between the kept estimates `from` and
// `to`. Duplicates of a kept estimate are free.
double span_deletion_cost(const std::vector<double>& t, std::size_t from, std::size_t to,
                          const PostprocConfig& cfg) {
  double cost = 0.0;
  for (std::size_t i = from + 1; i < to; ++i) {
    const double nearest = std::min(t[i] - t[from], t[to] - t[i]);
    if (nearest > cfg.snap_tolerance_sec) cost += cfg.deletion_penalty;
  }
  return cost;
}

}  // namespace

PostprocResult postprocess_barlines_detailed(const BarlineTrack& raw, const PostprocConfig& cfg) {
  cfg.validate();
  const auto& t = raw.times();
  const std::size_t n = t.size();
  const std::size_t n_factors = cfg.subdivision_factors.size();
  const std::size_t lookahead = cfg.lookahead;

  // State (i, d, f): estimate i is kept, the previous kept estimate is i - d
  // (1 <= d <= lookahead) and that span was split with factor index f. The
  // incoming measure length is therefore (t[i] - t[i-d]) / factor.
  const auto state = [&](std::size_t i, std::size_t d, std::size_t f) {
    return (i * lookahead + (d - 1)) * n_factors + f;
  };
  const std::size_t n_states = n * lookahead * n_factors;
  std::vector<double> cost(n_states, kInf);
  std::vector<std::size_t> parent(n_states, std::numeric_limits<std::size_t>::max());

  const auto span_len = [&](std::size_t i, std::size_t d, std::size_t f) {
    return (t[i] - t[i - d]) / cfg.subdivision_factors[f];
  };

  for (std::size_t d = 1; d <= lookahead && d < n; ++d) {
    for (std::size_t f = 0; f < n_factors; ++f) {
      cost[state(d, d, f)] = span_deletion_cost(t, 0, d, cfg) +
                              cfg.insertion_penalty * (cfg.subdivision_factors[f] - 1);
    }
  }

  for (std::size_t i = 1; i + 1 < n; ++i) {
    for (std::size_t d = 1; d <= lookahead && d <= i; ++d) {
      for (std::size_t f = 0; f < n_factors; ++f) {
        const std::size_t s = state(i, d, f);
        if (!std::isfinite(cost[s])) continue;
        const double incoming = span_len(i, d, f);
        for (std::size_t d2 = 1; d2 <= lookahead && i + d2 < n; ++d2) {
          for (std::size_t f2 = 0; f2 < n_factors; ++f2) {
            const std::size_t next = i + d2;
            const double c = cost[s] +
                             span_deletion_cost(t, i, next, cfg) +
                             cfg.insertion_penalty * (cfg.subdivision_factors[f2] - 1) +
                             tempo_change_cost(incoming, span_len(next, d2, f2), cfg);
            const std::size_t s2 = state(next, d2, f2);
            if (c < cost[s2]) {
              cost[s2] = c;
              parent[s2] = s;
            }
          }
        }
      }
    }
  }

  std::size_t final_state = std::numeric_limits<std::size_t>::max();
  double final_cost = kInf;
  for (std::size_t d = 1; d <= lookahead && d < n; ++d) {
    for (std::size_t f = 0; f < n_factors; ++f) {
      const std::size_t s = state(n - 1, d, f);
      if (cost[s] < final_cost) {
        final_cost = cost[s];
        final_state = s;
      }
    }
  }
  // Unreachable only if lookahead could not bridge the track, which d = 1 always can.
  if (!std::isfinite(final_cost)) throw Error("bar-line post-processing found no solution");

  // Walk back to recover the kept estimates and factors.
  std::vector<std::size_t> kept{n - 1};
  std::vector<int> factors;
  for (std::size_t s = final_state; s != std::numeric_limits<std::size_t>::max(); s = parent[s]) {
    const std::size_t f = s % n_factors;
    const std::size_t d = (s / n_factors) % lookahead + 1;
    const std::size_t i = s / n_factors / lookahead;
    kept.push_back(i - d);
    factors.push_back(cfg.subdivision_factors[f]);
  }
  std::reverse(kept.begin(), kept.end());
  std::reverse(factors.begin(), factors.end());

  std::vector<double> out;
  for (std::size_t j = 0; j + 1 < kept.size(); ++j) {
    const double a = t[kept[j]];
    const double b = t[kept[j + 1]];
    const int k = factors[j];
    for (int q = 0; q < k; ++q) out.push_back(a + (b - a) * q / k);
  }
  out.push_back(t.back());

  return PostprocResult{BarlineTrack(std::move(out)), final_cost, std::move(kept),
                        std::move(factors)};
}

BarlineTrack postprocess_barlines(const BarlineTrack& raw, const PostprocConfig& cfg) {
  return postprocess_barlines_detailed(raw, cfg).track;
}

double discontinuity_rate(const BarlineTrack& bars) {
  const std::size_t n = bars.measure_count();
  if (n < 2) return 0.0;
  std::size_t count = 0;
  for (std::size_t m = 1; m < n; ++m) {
    const double prev = bars.duration(m - 1);
    if (std::abs(bars.duration(m) - prev) / prev > kDiscontinuityThreshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace strumscribe
