#pragma once

#include <filesystem>

#include "ancbound/signal.hpp"

namespace ancbound {

enum class WavSampleFormat { kPcm16, kFloat32 };

struct WavData {
  Waveform channel0;  // multi-channel files keep only the first channel
  int channels = 1;
  WavSampleFormat format = WavSampleFormat::kFloat32;
};

// Reads 16-bit PCM or 32-bit IEEE float RIFF/WAVE files (plain or
// WAVE_FORMAT_EXTENSIBLE). Throws IoError on anything else.
WavData read_wav(const std::filesystem::path& path);

// Writes a mono file. PCM16 output is clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const Waveform& wave,
               WavSampleFormat format = WavSampleFormat::kFloat32);

}  // namespace ancbound
