#include "ancbound/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "ancbound/errors.hpp"

namespace ancbound {

static_assert(std::endian::native == std::endian::little,
              "WAV reader assumes a little-endian host");

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t off) {
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  return v;
}

template <typename T>
void put_le(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw IoError("not a RIFF/WAVE file: " + path.string());
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const char* data = nullptr;
  std::size_t data_len = 0;
  bool have_fmt = false;
  std::size_t off = 12;
  while (off + 8 <= buf.size()) {
    const std::string id(buf.data() + off, 4);
    const auto len = read_le<std::uint32_t>(buf, off + 4);
    const std::size_t body = off + 8;
    const std::size_t avail = std::min<std::size_t>(len, buf.size() - body);
    if (id == "fmt ") {
      if (avail < 16) throw IoError("truncated fmt chunk: " + path.string());
      format = read_le<std::uint16_t>(buf, body);
      channels = read_le<std::uint16_t>(buf, body + 2);
      rate = read_le<std::uint32_t>(buf, body + 4);
      bits = read_le<std::uint16_t>(buf, body + 14);
      if (format == kFormatExtensible && avail >= 26) {
        format = read_le<std::uint16_t>(buf, body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data = buf.data() + body;
      data_len = avail;
    }
    off = body + len + (len & 1u);
  }
  if (!have_fmt || data == nullptr) throw IoError("WAV file lacks fmt or data chunk: " + path.string());
  if (channels == 0 || rate == 0) throw IoError("WAV file has invalid header: " + path.string());

  WavData out{Waveform({}, static_cast<int>(rate)), channels, WavSampleFormat::kFloat32};
  std::vector<double> samples;
  if (format == kFormatPcm && bits == 16) {
    out.format = WavSampleFormat::kPcm16;
    const std::size_t frames = data_len / (2u * channels);
    samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
      std::int16_t v;
      std::memcpy(&v, data + i * 2u * channels, 2);
      samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const std::size_t frames = data_len / (4u * channels);
    samples.resize(frames);
    for (std::size_t i = 0; i < frames; ++i) {
      float v;
      std::memcpy(&v, data + i * 4u * channels, 4);
      samples[i] = static_cast<double>(v);
    }
  } else {
    throw IoError("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bits): " + path.string());
  }
  out.channel0 = Waveform(std::move(samples), static_cast<int>(rate));
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& wave, WavSampleFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write WAV file: " + path.string());
  const std::uint16_t bits = format == WavSampleFormat::kPcm16 ? 16 : 32;
  const std::uint16_t code = format == WavSampleFormat::kPcm16 ? kFormatPcm : kFormatFloat;
  const std::uint32_t bytes_per_sample = bits / 8u;
  const auto data_len = static_cast<std::uint32_t>(wave.size() * bytes_per_sample);
  const auto rate = static_cast<std::uint32_t>(wave.sample_rate_hz());

  out.write("RIFF", 4);
  put_le<std::uint32_t>(out, 36u + data_len);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, code);
  put_le<std::uint16_t>(out, 1);
  put_le<std::uint32_t>(out, rate);
  put_le<std::uint32_t>(out, rate * bytes_per_sample);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(bytes_per_sample));
  put_le<std::uint16_t>(out, bits);
  out.write("data", 4);
  put_le<std::uint32_t>(out, data_len);
  for (double v : wave.samples()) {
    if (format == WavSampleFormat::kPcm16) {
      const double clipped = std::clamp(v, -1.0, 1.0);
      put_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(std::min(clipped * 32768.0, 32767.0))));
    } else {
      put_le<float>(out, static_cast<float>(v));
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ancbound
