#include "strumscribe/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "strumscribe/error.hpp"

namespace strumscribe {

void SynthSpec::validate() const {
  if (!(tempo_bpm > 0.0) || !std::isfinite(tempo_bpm)) throw ValidationError("tempo_bpm must be > 0");
  if (measures < 1) throw ValidationError("measures must be >= 1");
  if (!(sigma_norm >= 0.0)) throw ValidationError("sigma_norm must be >= 0");
  const auto check_rate = [](double r, const char* name) {
    if (!(r >= 0.0 && r < 1.0)) throw ValidationError(std::string(name) + " must be in [0, 1)");
  };
  if (!(switch_prob >= 0.0 && switch_prob <= 1.0)) throw ValidationError("switch_prob must be in [0, 1]");
  check_rate(spurious_rate, "spurious_rate");
  check_rate(miss_rate, "miss_rate");
  check_rate(rest_prob, "rest_prob");
}

namespace {

class PatternChooser {
 public:
  explicit PatternChooser(const Vocabulary& vocab) : vocab_(vocab) {
    for (std::size_t p = 0; p < vocab.size(); ++p) {
      if (!vocab[p].is_empty()) playable_.push_back(p);
    }
    if (playable_.empty()) throw ValidationError("synthesis needs at least one non-empty pattern");
  }

  std::size_t any(std::mt19937_64& rng) const { return pick(playable_, rng); }

  std::size_t other_than(std::size_t current, std::mt19937_64& rng) const {
    std::vector<std::size_t> pool;
    for (std::size_t p : playable_) {
      if (p != current) pool.push_back(p);
    }
    return pool.empty() ? current : pick(pool, rng);
  }

  // Replacement for a 2-measure pattern that would overrun the song end.
  std::size_t single_measure_fallback(std::size_t p, std::mt19937_64& rng) const {
    std::vector<std::size_t> same_sig, any_sig;
    for (std::size_t q : playable_) {
      if (vocab_[q].measures() != 1) continue;
      any_sig.push_back(q);
      if (vocab_[q].time_signature == vocab_[p].time_signature) same_sig.push_back(q);
    }
    if (!same_sig.empty()) return pick(same_sig, rng);
    if (!any_sig.empty()) return pick(any_sig, rng);
    return empty_for(p);
  }

  std::size_t empty_for(std::size_t p) const {
    return *vocab_.index_of(empty_pattern_id(vocab_[p].time_signature));
  }

 private:
  static std::size_t pick(const std::vector<std::size_t>& pool, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng)];
  }

  const Vocabulary& vocab_;
  std::vector<std::size_t> playable_;
};

}  // namespace

SynthSong generate_song(const SynthSpec& spec, const Vocabulary& vocab) {
  spec.validate();
  PatternChooser chooser(vocab);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Pattern sequence, one entry per measure.
  Transcription truth;
  std::size_t current = chooser.any(rng);
  bool first = true;
  while (truth.entries.size() < spec.measures) {
    if (!first && unit(rng) < spec.switch_prob) current = chooser.other_than(current, rng);
    first = false;
    std::size_t occurrence = current;
    if (spec.rest_prob > 0.0 && unit(rng) < spec.rest_prob) occurrence = chooser.empty_for(current);
    const std::size_t remaining = spec.measures - truth.entries.size();
    if (static_cast<std::size_t>(vocab[occurrence].measures()) > remaining) {
      occurrence = chooser.single_measure_fallback(occurrence, rng);
    }
    const auto& pattern = vocab[occurrence];
    for (int k = 0; k < pattern.measures(); ++k) {
      TranscriptionEntry e;
      e.measure_index = truth.entries.size();
      e.pattern_id = pattern.id;
      e.phase = k;
      e.time_signature = pattern.time_signature;
      truth.entries.push_back(std::move(e));
    }
  }

  std::vector<double> lines{0.0};
  const double quarter_sec = 60.0 / spec.tempo_bpm;
  for (const auto& e : truth.entries) {
    lines.push_back(lines.back() + e.time_signature.quarter_notes() * quarter_sec);
  }
  BarlineTrack bars(lines);

  std::vector<double> nominal;
  std::vector<double> observed;
  std::normal_distribution<double> jitter(0.0, spec.sigma_norm > 0.0 ? spec.sigma_norm : 1.0);
  for (std::size_t m = 0; m < truth.entries.size(); ++m) {
    const auto& e = truth.entries[m];
    const auto& positions = vocab.at(e.pattern_id).onsets[static_cast<std::size_t>(e.phase)];
    for (double pos : positions) {
      nominal.push_back(bars.start(m) + pos * bars.duration(m));
      if (spec.miss_rate > 0.0 && unit(rng) < spec.miss_rate) continue;
      double played = pos;
      if (spec.sigma_norm > 0.0) {
        for (int attempt = 0; attempt < 64; ++attempt) {
          const double offset = jitter(rng);
          const double candidate = pos + offset;
          if (std::abs(offset) <= 3.0 * spec.sigma_norm && candidate >= 0.0 && candidate < 1.0) {
            played = candidate;
            break;
          }
        }
      }
      observed.push_back(bars.start(m) + played * bars.duration(m));
    }
  }

  if (spec.spurious_rate > 0.0) {
    const std::size_t n_nominal = nominal.size();
    std::uniform_real_distribution<double> anywhere(lines.front(), lines.back());
    for (std::size_t i = 0; i < n_nominal; ++i) {
      if (unit(rng) < spec.spurious_rate) observed.push_back(anywhere(rng));
    }
  }

  std::sort(observed.begin(), observed.end());
  std::vector<double> spaced;
  for (double t : observed) {
    if (spaced.empty() || t - spaced.back() >= kMinStrumSpacingSec) spaced.push_back(t);
  }

  return SynthSong{std::move(truth), std::move(bars), StrumSequence(std::move(nominal)),
                   StrumSequence(std::move(spaced))};
}

AudioBuffer render_pluck_train(std::span<const double> onsets_sec, double duration_sec,
                               int sample_rate, std::uint64_t seed, double amplitude,
                               double decay_sec) {
  if (sample_rate <= 0) throw ValidationError("sample rate must be > 0");
  if (!(duration_sec > 0.0)) throw ValidationError("duration must be > 0");
  AudioBuffer audio;
  audio.sample_rate = sample_rate;
  audio.samples.assign(static_cast<std::size_t>(std::ceil(duration_sec * sample_rate)), 0.0f);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  const auto burst_len = static_cast<std::size_t>(std::ceil(8.0 * decay_sec * sample_rate));
  for (double onset : onsets_sec) {
    const auto start = static_cast<std::size_t>(std::llround(onset * sample_rate));
    for (std::size_t i = 0; i < burst_len && start + i < audio.samples.size(); ++i) {
      const double env = amplitude * std::exp(-static_cast<double>(i) / (decay_sec * sample_rate));
      audio.samples[start + i] += static_cast<float>(env * noise(rng));
    }
  }
  for (auto& s : audio.samples) s = std::clamp(s, -1.0f, 1.0f);
  return audio;
}

}  // namespace strumscribe
