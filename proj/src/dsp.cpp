#include "ancbound/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ancbound/errors.hpp"
#include "ancbound/fft.hpp"

namespace ancbound {

namespace {

constexpr int kResampleTaps = 64;
constexpr std::size_t kDirectConvolutionMax = 32;
constexpr std::size_t kDirectIrMax = 1024;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> PsdEstimate::normalized_density() const {
  // S(omega) d(omega) = S(f) df with omega = 2 pi f / fs.
  const double scale = static_cast<double>(sample_rate_hz) / (2.0 * std::numbers::pi);
  std::vector<double> out(power_density);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> PsdEstimate::normalized_freqs() const {
  const double scale = 2.0 * std::numbers::pi / static_cast<double>(sample_rate_hz);
  std::vector<double> out(freqs_hz);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> fft_convolve(std::span<const double> signal, std::span<const double> ir,
                                 ConvolutionMode mode) {
  if (signal.empty() || ir.empty()) throw ArgumentError("fft_convolve: empty input");
  const std::size_t full_len = signal.size() + ir.size() - 1;
  const std::size_t out_len = mode == ConvolutionMode::kTruncated ? signal.size() : full_len;
  if (signal.size() <= kDirectConvolutionMax || ir.size() <= kDirectIrMax) {
    // Direct form for room-length filters: each output sample depends only on
    // past input, bit for bit, whatever the signal length.
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < signal.size(); ++i) {
      const std::size_t stop = std::min(ir.size(), out_len - i);
      for (std::size_t k = 0; k < stop; ++k) out[i + k] += signal[i] * ir[k];
    }
    return out;
  }
  RealFft fft(next_pow2(full_len));
  auto a = fft.forward(signal);
  const auto b = fft.forward(ir);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
  auto out = fft.inverse(a);
  out.resize(out_len);
  return out;
}

Waveform fft_convolve(const Waveform& signal, const ImpulseResponse& ir, ConvolutionMode mode) {
  if (signal.sample_rate_hz() != ir.sample_rate_hz()) {
    throw ConfigError("fft_convolve: sample rate mismatch (" +
                      std::to_string(signal.sample_rate_hz()) + " Hz signal, " +
                      std::to_string(ir.sample_rate_hz()) + " Hz impulse response)");
  }
  if (signal.empty()) throw ArgumentError("fft_convolve: empty signal");
  return Waveform(fft_convolve(signal.samples(), ir.taps(), mode), signal.sample_rate_hz());
}

PsdEstimate welch_psd(const Waveform& signal, std::size_t window_len, double overlap_frac) {
  const std::size_t n = signal.size();
  if (window_len < 2) throw ArgumentError("welch_psd: window_len must be at least 2");
  if (window_len > n) throw ArgumentError("welch_psd: window longer than signal");
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
    throw ArgumentError("welch_psd: overlap_frac must lie in [0, 1)");
  }
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(window_len) * (1.0 - overlap_frac))));

  std::vector<double> window(window_len);
  for (std::size_t j = 0; j < window_len; ++j) {
    window[j] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                     static_cast<double>(window_len));
  }

  RealFft fft(window_len);
  std::vector<double> accum(fft.bins(), 0.0);
  std::vector<double> frame(window_len);
  double coverage = 0.0;  // sum of w^2 over in-range samples, all frames
  const auto x = signal.samples();
  const auto first = -static_cast<std::ptrdiff_t>(window_len - hop);
  for (std::ptrdiff_t start = first; start < static_cast<std::ptrdiff_t>(n);
       start += static_cast<std::ptrdiff_t>(hop)) {
    for (std::size_t j = 0; j < window_len; ++j) {
      const std::ptrdiff_t idx = start + static_cast<std::ptrdiff_t>(j);
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n)) {
        frame[j] = window[j] * x[static_cast<std::size_t>(idx)];
        coverage += window[j] * window[j];
      } else {
        frame[j] = 0.0;
      }
    }
    const auto spec = fft.forward(frame);
    for (std::size_t k = 0; k < spec.size(); ++k) accum[k] += std::norm(spec[k]);
  }

  const double fs = signal.sample_rate_hz();
  PsdEstimate psd;
  psd.sample_rate_hz = signal.sample_rate_hz();
  psd.window_len = window_len;
  psd.overlap_frac = overlap_frac;
  psd.freqs_hz.resize(accum.size());
  psd.power_density.resize(accum.size());
  // Parseval per frame: sum_j (w x)^2 = (1/L) sum_k |X_k|^2 over all L bins.
  const double scale = coverage > 0.0 ? 2.0 / (coverage * fs) : 0.0;
  for (std::size_t k = 0; k < accum.size(); ++k) {
    psd.freqs_hz[k] = static_cast<double>(k) * fs / static_cast<double>(window_len);
    psd.power_density[k] = accum[k] * scale;
  }
  return psd;
}

double signal_power(std::span<const double> samples) {
  if (samples.empty()) throw ArgumentError("signal_power: empty signal");
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / static_cast<double>(samples.size());
}

double signal_power(const Waveform& signal) { return signal_power(signal.samples()); }

double psd_power(const PsdEstimate& psd) {
  const auto& f = psd.freqs_hz;
  const auto& p = psd.power_density;
  if (f.size() != p.size()) throw ArgumentError("psd_power: grid/density size mismatch");
  double acc = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) {
    acc += 0.5 * (p[k] + p[k - 1]) * (f[k] - f[k - 1]);
  }
  return acc;
}

Waveform resample(const Waveform& signal, int target_rate_hz) {
  if (target_rate_hz <= 0) throw ArgumentError("resample: target rate must be positive");
  const int rate = signal.sample_rate_hz();
  if (rate == target_rate_hz) return signal;
  const int g = std::gcd(rate, target_rate_hz);
  const long long up = target_rate_hz / g;
  const long long down = rate / g;
  const double cutoff = std::min(1.0, static_cast<double>(target_rate_hz) / rate);
  constexpr int half = kResampleTaps / 2;

  const auto x = signal.samples();
  const auto n = static_cast<long long>(x.size());
  const long long out_len = (n * up + down - 1) / down;
  std::vector<double> out(static_cast<std::size_t>(out_len));
  for (long long m = 0; m < out_len; ++m) {
    const long long pos = m * down;
    const long long base = pos / up;
    const double frac = static_cast<double>(pos % up) / static_cast<double>(up);
    double acc = 0.0;
    for (int j = -half + 1; j <= half; ++j) {
      const long long idx = base + j;
      if (idx < 0 || idx >= n) continue;
      const double t = frac - j;
      const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * t / half);
      acc += x[static_cast<std::size_t>(idx)] * cutoff * sinc(cutoff * t) * w;
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return Waveform(std::move(out), target_rate_hz);
}

Waveform standardize_to_length(const Waveform& signal, int target_rate_hz,
                               std::size_t target_len) {
  if (target_rate_hz <= 0 || target_len == 0) {
    throw ArgumentError("standardize: target rate and length must be positive");
  }
  const Waveform resampled = resample(signal, target_rate_hz);
  if (resampled.size() == target_len) return resampled;
  std::vector<double> out(resampled.vec());
  out.resize(target_len, 0.0);
  return Waveform(std::move(out), target_rate_hz);
}

Waveform standardize(const Waveform& signal, int target_rate_hz, double target_seconds) {
  if (target_rate_hz <= 0 || !(target_seconds > 0.0)) {
    throw ArgumentError("standardize: target rate and duration must be positive");
  }
  const auto len = static_cast<std::size_t>(std::llround(target_rate_hz * target_seconds));
  return standardize_to_length(signal, target_rate_hz, len);
}

}  // namespace ancbound
