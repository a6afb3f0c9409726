#include "strumscribe/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "strumscribe/error.hpp"

namespace strumscribe {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t n, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw ValidationError(std::string("truncated WAV file while reading ") + what);
  }
}

void put16(std::ostream& out, std::uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xFF), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void put32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>(v >> 24)};
  out.write(b, 4);
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  bool seen = false;
};

float decode_sample(const unsigned char* p, const Format& fmt) {
  if (fmt.tag == kFormatFloat) {
    float v;
    std::uint32_t raw = le32(p);
    std::memcpy(&v, &raw, sizeof v);
    return v;
  }
  switch (fmt.bits) {
    case 16:
      return static_cast<float>(static_cast<std::int16_t>(le16(p))) / 32768.0f;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(static_cast<std::uint32_t>(p[0]) |
                                                 (static_cast<std::uint32_t>(p[1]) << 8) |
                                                 (static_cast<std::uint32_t>(p[2]) << 16));
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<float>(v) / 8388608.0f;
    }
    case 32:
      return static_cast<float>(static_cast<double>(static_cast<std::int32_t>(le32(p))) /
                                2147483648.0);
    default:
      throw ValidationError("unsupported PCM bit depth " + std::to_string(fmt.bits));
  }
}

}  // namespace

void AudioBuffer::validate() const {
  if (sample_rate <= 0) throw ValidationError("sample rate must be > 0");
  for (float s : samples) {
    if (!std::isfinite(s)) throw ValidationError("audio contains non-finite samples");
  }
}

AudioBuffer read_wav(std::istream& in) {
  std::array<unsigned char, 12> header{};
  read_exact(in, header.data(), header.size(), "RIFF header");
  if (std::memcmp(header.data(), "RIFF", 4) != 0 || std::memcmp(header.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("not a RIFF/WAVE file");
  }

  Format fmt;
  while (true) {
    std::array<unsigned char, 8> chunk{};
    in.read(reinterpret_cast<char*>(chunk.data()), 8);
    if (in.gcount() != 8) throw ValidationError("WAV file has no data chunk");
    const std::uint32_t size = le32(chunk.data() + 4);

    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      if (size < 16) throw ValidationError("WAV fmt chunk too small");
      std::vector<unsigned char> body(size + (size & 1));
      read_exact(in, body.data(), body.size(), "fmt chunk");
      fmt.tag = le16(body.data());
      fmt.channels = le16(body.data() + 2);
      fmt.sample_rate = le32(body.data() + 4);
      fmt.bits = le16(body.data() + 14);
      if (fmt.tag == kFormatExtensible) {
        if (size < 40) throw ValidationError("WAV extensible fmt chunk too small");
        fmt.tag = le16(body.data() + 24);  // first two bytes of the subformat GUID
      }
      fmt.seen = true;
      continue;
    }

    if (std::memcmp(chunk.data(), "data", 4) != 0) {
      in.ignore(static_cast<std::streamsize>(size + (size & 1)));
      if (!in) throw ValidationError("truncated WAV chunk");
      continue;
    }

    if (!fmt.seen) throw ValidationError("WAV data chunk precedes fmt chunk");
    if (fmt.channels == 0) throw ValidationError("WAV file declares zero channels");
    if (fmt.sample_rate == 0) throw ValidationError("WAV file declares a zero sample rate");
    if (fmt.tag == kFormatFloat) {
      if (fmt.bits != 32) throw ValidationError("only 32-bit float WAV is supported");
    } else if (fmt.tag == kFormatPcm) {
      if (fmt.bits != 16 && fmt.bits != 24 && fmt.bits != 32) {
        throw ValidationError("unsupported PCM bit depth " + std::to_string(fmt.bits));
      }
    } else {
      throw ValidationError("unsupported WAV format tag " + std::to_string(fmt.tag));
    }

    const std::size_t bytes_per_sample = fmt.bits / 8u;
    const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
    std::vector<unsigned char> data(size);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(size));
    // Tolerate writers that overstate the data size; keep whole frames only.
    const std::size_t frames = static_cast<std::size_t>(in.gcount()) / frame_bytes;

    AudioBuffer audio;
    audio.sample_rate = static_cast<int>(fmt.sample_rate);
    audio.samples.resize(frames);
    for (std::size_t f = 0; f < frames; ++f) {
      double sum = 0.0;
      for (std::size_t c = 0; c < fmt.channels; ++c) {
        sum += decode_sample(data.data() + f * frame_bytes + c * bytes_per_sample, fmt);
      }
      audio.samples[f] = static_cast<float>(sum / fmt.channels);
    }
    audio.validate();
    return audio;
  }
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_wav(in);
}

void write_wav(std::ostream& out, const AudioBuffer& audio, WavEncoding encoding) {
  audio.validate();
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : encoding == WavEncoding::Pcm24 ? 24 : 32;
  const std::uint16_t tag = encoding == WavEncoding::Float32 ? kFormatFloat : kFormatPcm;
  const std::uint32_t bytes = bits / 8u;
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * bytes);

  out.write("RIFF", 4);
  put32(out, 36 + data_size + (data_size & 1));
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put32(out, 16);
  put16(out, tag);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put32(out, static_cast<std::uint32_t>(audio.sample_rate) * bytes);
  put16(out, static_cast<std::uint16_t>(bytes));
  put16(out, bits);
  out.write("data", 4);
  put32(out, data_size);

  for (float s : audio.samples) {
    const double x = std::clamp(static_cast<double>(s), -1.0, 1.0);
    switch (encoding) {
      case WavEncoding::Pcm16:
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(
                       std::lround(std::clamp(x * 32768.0, -32768.0, 32767.0)))));
        break;
      case WavEncoding::Pcm24: {
        const auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(
            std::lround(std::clamp(x * 8388608.0, -8388608.0, 8388607.0))));
        const char b[3] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                           static_cast<char>((v >> 16) & 0xFF)};
        out.write(b, 3);
        break;
      }
      case WavEncoding::Float32: {
        std::uint32_t raw;
        std::memcpy(&raw, &s, sizeof raw);
        put32(out, raw);
        break;
      }
    }
  }
  if (data_size & 1) out.put('\0');
  if (!out) throw IoError("failed to write WAV data");
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& audio, WavEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_wav(out, audio, encoding);
}

}  // namespace strumscribe
