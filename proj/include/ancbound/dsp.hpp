#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ancbound/signal.hpp"

namespace ancbound {

/// One-sided power spectral density on a uniform grid from 0 to fs/2.
///
/// Every bin, DC and Nyquist included, holds 2*S(f) where S is the
/// two-sided density, so the trapezoidal integral over [0, fs/2] equals the
/// average power of the analysed signal.
struct PsdEstimate {
  std::vector<double> freqs_hz;
  std::vector<double> power_density;  // power per Hz
  int sample_rate_hz = 0;
  std::size_t window_len = 0;
  double overlap_frac = 0.0;

  // Density per rad/sample on the matching grid of omega in [0, pi].
  std::vector<double> normalized_density() const;
  std::vector<double> normalized_freqs() const;
};

struct WelchOptions {
  std::size_t window_len = 1024;
  double overlap_frac = 0.75;
};

enum class ConvolutionMode { kTruncated, kFull };

// Linear convolution. Filters up to 1024 taps use the direct form so results
// are causal to the last bit; longer ones go through the FFT. kTruncated keeps
// the first signal.size() samples so the result lines up with the input.
Waveform fft_convolve(const Waveform& signal, const ImpulseResponse& ir,
                      ConvolutionMode mode = ConvolutionMode::kTruncated);

std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> ir,
                                 ConvolutionMode mode = ConvolutionMode::kTruncated);

// Welch estimate with a periodic Hann taper. Frames run from -(L - hop) so
// every sample sees every window phase; the result is normalized by the
// per-sample window coverage, which makes the integral exactly the mean
// square whenever the squared window overlap-adds to a constant (Hann at
// 75% overlap).
PsdEstimate welch_psd(const Waveform& signal, std::size_t window_len, double overlap_frac);
inline PsdEstimate welch_psd(const Waveform& signal, const WelchOptions& opts = {}) {
  return welch_psd(signal, opts.window_len, opts.overlap_frac);
}

double signal_power(const Waveform& signal);
double signal_power(std::span<const double> samples);

// Trapezoidal integral of the density over the band.
double psd_power(const PsdEstimate& psd);

// Band-limited resampling with a Hann-windowed sinc, 64 taps per phase.
Waveform resample(const Waveform& signal, int target_rate_hz);

// Resample to target_rate_hz then trim or zero-pad to the target length.
Waveform standardize(const Waveform& signal, int target_rate_hz, double target_seconds);
Waveform standardize_to_length(const Waveform& signal, int target_rate_hz,
                               std::size_t target_len);

}  // namespace ancbound
