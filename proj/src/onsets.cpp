#include "strumscribe/onsets.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "strumscribe/error.hpp"
#include "strumscribe/metrics.hpp"

namespace strumscribe {

void OnsetConfig::validate() const {
  if (frame_size < 2) throw ValidationError("frame_size must be >= 2");
  if (hop_size < 1 || hop_size > frame_size) throw ValidationError("hop_size must be in [1, frame_size]");
  if (mel_bands < 1) throw ValidationError("mel_bands must be >= 1");
  if (!(fmin_hz >= 0.0) || !(fmax_hz > fmin_hz)) throw ValidationError("need 0 <= fmin_hz < fmax_hz");
  if (!(log_gain > 0.0)) throw ValidationError("log_gain must be > 0");
  if (!(delta >= 0.0)) throw ValidationError("delta must be >= 0");
  if (pre_max < 1 || post_max < 1 || pre_avg < 1 || post_avg < 1) {
    throw ValidationError("peak-picking windows must be >= 1 frame");
  }
  if (!(min_gap_sec >= 0.0)) throw ValidationError("min_gap_sec must be >= 0");
}

namespace {

double hz_to_mel(double hz) {
  // Slaney scale: linear below 1 kHz, logarithmic above.
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  const double log_step = std::log(6.4) / 27.0;
  if (hz < kBreakHz) return hz / kLinearStep;
  return kBreakHz / kLinearStep + std::log(hz / kBreakHz) / log_step;
}

double mel_to_hz(double mel) {
  constexpr double kLinearStep = 200.0 / 3.0;
  constexpr double kBreakHz = 1000.0;
  const double log_step = std::log(6.4) / 27.0;
  const double break_mel = kBreakHz / kLinearStep;
  if (mel < break_mel) return mel * kLinearStep;
  return kBreakHz * std::exp(log_step * (mel - break_mel));
}

struct MelBand {
  std::size_t first_bin = 0;
  std::vector<double> weights;
};

// Triangular filters with unit peak, spaced evenly on the mel scale.
std::vector<MelBand> mel_filterbank(const OnsetConfig& cfg, int sample_rate) {
  const std::size_t bins = static_cast<std::size_t>(cfg.frame_size) / 2 + 1;
  const double fmax = std::min(cfg.fmax_hz, sample_rate / 2.0);
  const double lo = hz_to_mel(cfg.fmin_hz);
  const double hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(cfg.mel_bands) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (edges.size() - 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / cfg.frame_size;

  std::vector<MelBand> bands(static_cast<std::size_t>(cfg.mel_bands));
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const double left = edges[b], centre = edges[b + 1], right = edges[b + 2];
    bool started = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f < right) w = f <= centre ? (f - left) / (centre - left) : (right - f) / (right - centre);
      if (w <= 0.0) {
        if (started) break;
        continue;
      }
      if (!started) {
        bands[b].first_bin = k;
        started = true;
      }
      bands[b].weights.push_back(w);
    }
  }
  return bands;
}

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* plan) const { fftw_destroy_plan(plan); }
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<double> onset_strength(const AudioBuffer& audio, const OnsetConfig& cfg) {
  cfg.validate();
  audio.validate();
  const auto n = audio.samples.size();
  const auto frame = static_cast<std::size_t>(cfg.frame_size);
  const auto hop = static_cast<std::size_t>(cfg.hop_size);
  if (n < frame) {
    throw ValidationError("audio has " + std::to_string(n) + " samples, fewer than one frame (" +
                          std::to_string(frame) + ")");
  }

  const std::size_t frames = n / hop + 1;
  const std::size_t bins = frame / 2 + 1;
  const auto bands = mel_filterbank(cfg, audio.sample_rate);

  std::vector<double> window(frame);
  for (std::size_t i = 0; i < frame; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / frame);
  }
  // Scales magnitudes so a full-scale sinusoid peaks at 1.
  const double norm = 2.0 / std::accumulate(window.begin(), window.end(), 0.0);

  std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * frame)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
      fftw_plan_dft_r2c_1d(static_cast<int>(frame), in.get(), out.get(), FFTW_ESTIMATE));

  std::vector<double> envelope(frames, 0.0);
  std::vector<double> previous(bands.size(), 0.0);
  std::vector<double> current(bands.size(), 0.0);
  const auto half_hop = static_cast<std::ptrdiff_t>(hop / 2);

  for (std::size_t t = 0; t < frames; ++t) {
    const std::ptrdiff_t end = static_cast<std::ptrdiff_t>(t * hop) + half_hop;
    const std::ptrdiff_t begin = end - static_cast<std::ptrdiff_t>(frame);
    for (std::size_t i = 0; i < frame; ++i) {
      const std::ptrdiff_t s = begin + static_cast<std::ptrdiff_t>(i);
      const double x = (s >= 0 && s < static_cast<std::ptrdiff_t>(n)) ? audio.samples[static_cast<std::size_t>(s)] : 0.0;
      in.get()[i] = x * window[i];
    }
    fftw_execute(plan.get());

    for (std::size_t b = 0; b < bands.size(); ++b) {
      double energy = 0.0;
      for (std::size_t j = 0; j < bands[b].weights.size(); ++j) {
        const auto& c = out.get()[bands[b].first_bin + j];
        energy += bands[b].weights[j] * std::hypot(c[0], c[1]);
      }
      current[b] = std::log1p(cfg.log_gain * norm * energy);
    }
    if (t > 0) {
      double flux = 0.0;
      for (std::size_t b = 0; b < bands.size(); ++b) flux += std::max(0.0, current[b] - previous[b]);
      envelope[t] = flux;
    }
    std::swap(previous, current);
  }
  return envelope;
}

StrumSequence pick_peaks(std::span<const double> envelope, int sample_rate, const OnsetConfig& cfg) {
  cfg.validate();
  if (sample_rate <= 0) throw ValidationError("sample rate must be > 0");
  const std::size_t n = envelope.size();
  if (n == 0) return {};
  const double peak = *std::max_element(envelope.begin(), envelope.end());
  if (!(peak > 0.0)) return {};

  const double frame_sec = static_cast<double>(cfg.hop_size) / sample_rate;
  const auto window = [&](std::size_t t, int before, int after) {
    const std::size_t lo = t >= static_cast<std::size_t>(before) ? t - static_cast<std::size_t>(before) : 0;
    const std::size_t hi = std::min(n - 1, t + static_cast<std::size_t>(after));
    return std::pair{lo, hi};
  };

  std::vector<double> times;
  std::ptrdiff_t last = -1;
  for (std::size_t t = 0; t < n; ++t) {
    const double value = envelope[t] / peak;
    if (!(value > 0.0)) continue;

    const auto [mlo, mhi] = window(t, cfg.pre_max, cfg.post_max);
    bool is_max = true;
    for (std::size_t i = mlo; i <= mhi && is_max; ++i) is_max = envelope[i] <= envelope[t];
    if (!is_max) continue;

    const auto [alo, ahi] = window(t, cfg.pre_avg, cfg.post_avg);
    double mean = 0.0;
    for (std::size_t i = alo; i <= ahi; ++i) mean += envelope[i];
    mean /= static_cast<double>(ahi - alo + 1) * peak;
    if (value < mean + cfg.delta) continue;

    if (last >= 0 && (static_cast<double>(t) - static_cast<double>(last)) * frame_sec < cfg.min_gap_sec) {
      continue;
    }
    times.push_back(static_cast<double>(t) * frame_sec);
    last = static_cast<std::ptrdiff_t>(t);
  }
  return StrumSequence(std::move(times));
}

StrumSequence detect_onsets(const AudioBuffer& audio, const OnsetConfig& cfg) {
  return pick_peaks(onset_strength(audio, cfg), audio.sample_rate, cfg);
}

TuningResult tune_onset_config(std::span<const LabeledAudio> labeled, const OnsetConfig& base,
                               int trials, std::uint64_t seed, double tolerance_sec) {
  if (labeled.empty()) throw ValidationError("tuning needs at least one labeled recording");
  if (trials < 1) throw ValidationError("tuning needs at least one trial");

  std::vector<std::vector<double>> envelopes;
  envelopes.reserve(labeled.size());
  for (const auto& item : labeled) envelopes.push_back(onset_strength(item.audio, base));

  const auto score = [&](const OnsetConfig& cfg) {
    double sum = 0.0;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      const auto est = pick_peaks(envelopes[i], labeled[i].audio.sample_rate, cfg);
      sum += match_events(labeled[i].onsets.times(), est.times(), tolerance_sec).f1;
    }
    return sum / static_cast<double>(labeled.size());
  };

  TuningResult best{base, score(base)};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> delta(0.0, 0.5);
  std::uniform_int_distribution<int> max_window(1, 10);
  std::uniform_int_distribution<int> avg_window(1, 30);
  std::uniform_real_distribution<double> gap(0.0, 0.1);
  for (int trial = 1; trial < trials; ++trial) {
    OnsetConfig cfg = base;
    cfg.delta = delta(rng);
    cfg.pre_max = max_window(rng);
    cfg.post_max = max_window(rng);
    cfg.pre_avg = avg_window(rng);
    cfg.post_avg = avg_window(rng);
    cfg.min_gap_sec = gap(rng);
    const double f1 = score(cfg);
    if (f1 > best.mean_f1) best = {cfg, f1};
  }
  return best;
}

}  // namespace strumscribe
