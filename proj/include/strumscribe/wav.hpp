#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace strumscribe {

/// Mono audio, samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = 44100;

  double duration_sec() const { return static_cast<double>(samples.size()) / sample_rate; }
  /// Throws ValidationError for a non-positive rate or non-finite samples.
  void validate() const;
};

enum class WavEncoding { Pcm16, Pcm24, Float32 };

/// Reads RIFF/WAVE with 16-, 24- or 32-bit integer PCM or 32-bit float data
/// (plain or WAVE_FORMAT_EXTENSIBLE). Multichannel input is mixed down by
/// averaging the channels.
AudioBuffer read_wav(std::istream& in);
AudioBuffer read_wav(const std::filesystem::path& path);

void write_wav(std::ostream& out, const AudioBuffer& audio, WavEncoding encoding = WavEncoding::Pcm16);
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio,
               WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace strumscribe
