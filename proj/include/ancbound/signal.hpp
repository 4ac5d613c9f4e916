#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ancbound {

/// Uniformly sampled real signal. Samples are validated finite on
/// construction and never change afterwards.
class Waveform {
 public:
  Waveform(std::vector<double> samples, int sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& vec() const noexcept { return samples_; }
  int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

/// Finite impulse response of an acoustic path (at least one tap).
class ImpulseResponse {
 public:
  ImpulseResponse(std::vector<double> taps, int sample_rate_hz);

  std::span<const double> taps() const noexcept { return taps_; }
  const std::vector<double>& vec() const noexcept { return taps_; }
  int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return taps_.size(); }
  double operator[](std::size_t i) const noexcept { return taps_[i]; }

  // Sum of squared taps.
  double energy() const noexcept;
  // Index of the largest-magnitude tap (first on ties).
  std::size_t peak_index() const noexcept;
  // Index of the first-arriving lobe: the first tap reaching onset_fraction
  // of the largest magnitude, moved to the local maximum right after it. In
  // reverberant rooms coincident reflections can outweigh the direct path,
  // so this differs from peak_index().
  std::size_t direct_path_index(double onset_fraction = 0.2) const noexcept;
  // Energy of the taps within +/- half_width samples of the direct-path lobe.
  double direct_path_energy(std::size_t half_width = 2) const noexcept;

  ImpulseResponse scaled(double gain) const;

 private:
  std::vector<double> taps_;
  int sample_rate_hz_;
};

}  // namespace ancbound
