#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library under test.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> v(n);
  for (double& s : v) s = g(rng);
  return v;
}

inline std::vector<double> sine(std::size_t n, double freq_hz, double fs, double amp = 1.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz * i / fs);
  return v;
}

// O(n*m) causal convolution truncated to the signal length.
inline std::vector<double> direct_convolve(const std::vector<double>& x, const std::vector<double>& h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < h.size() && k <= n; ++k) acc += static_cast<long double>(h[k]) * x[n - k];
    y[n] = static_cast<double>(acc);
  }
  return y;
}

inline double mean_square(const std::vector<double>& v) {
  long double acc = 0.0L;
  for (double s : v) acc += static_cast<long double>(s) * s;
  return static_cast<double>(acc / v.size());
}

inline double rms_diff(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(static_cast<double>(acc / a.size()));
}

// Sabine reflection coefficient evaluated straight from the formula.
inline double sabine_beta(double lx, double ly, double lz, double t60, double c) {
  const double volume = lx * ly * lz;
  const double surface = 2.0 * (lx * ly + lx * lz + ly * lz);
  const double alpha = 24.0 * volume * std::log(10.0) / (c * surface * t60);
  return std::sqrt(1.0 - alpha);
}

inline double gaussian_mi(double rho) { return -0.5 * std::log(1.0 - rho * rho); }

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// Ideal half-band low-pass sampled on an n-point DFT grid: unit gain on bins
// 0..n/4-1, exactly zero above, delayed by n/2 samples.
inline std::vector<double> halfband_lowpass(std::size_t n) {
  std::vector<double> h(n);
  const std::size_t pass = n / 4;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 1.0;
    const double t = static_cast<double>(i) - static_cast<double>(n / 2);
    for (std::size_t k = 1; k < pass; ++k) acc += 2.0 * std::cos(2.0 * std::numbers::pi * k * t / n);
    h[i] = acc / static_cast<double>(n);
  }
  return h;
}

}  // namespace oracle
