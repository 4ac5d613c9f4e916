#include "ancbound/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ancbound/errors.hpp"

namespace ancbound {

namespace {

void check_finite(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ArgumentError(std::string(what) + ": non-finite value at index " +
                          std::to_string(i));
    }
  }
}

}  // namespace

Waveform::Waveform(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) {
    throw ArgumentError("Waveform: sample rate must be positive");
  }
  check_finite(samples_, "Waveform");
}

ImpulseResponse::ImpulseResponse(std::vector<double> taps, int sample_rate_hz)
    : taps_(std::move(taps)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) {
    throw ArgumentError("ImpulseResponse: sample rate must be positive");
  }
  if (taps_.empty()) {
    throw ArgumentError("ImpulseResponse: needs at least one tap");
  }
  check_finite(taps_, "ImpulseResponse");
}

double ImpulseResponse::energy() const noexcept {
  double acc = 0.0;
  for (double t : taps_) acc += t * t;
  return acc;
}

std::size_t ImpulseResponse::peak_index() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < taps_.size(); ++i) {
    if (std::abs(taps_[i]) > std::abs(taps_[best])) best = i;
  }
  return best;
}

std::size_t ImpulseResponse::direct_path_index(double onset_fraction) const noexcept {
  const double level = onset_fraction * std::abs(taps_[peak_index()]);
  std::size_t onset = 0;
  while (onset < taps_.size() && std::abs(taps_[onset]) < level) ++onset;
  // The onset may land on a precursor ripple of the interpolation kernel;
  // the main lobe follows within a couple of samples.
  const std::size_t stop = std::min(taps_.size(), onset + 4);
  std::size_t best = onset;
  for (std::size_t i = onset + 1; i < stop; ++i) {
    if (std::abs(taps_[i]) > std::abs(taps_[best])) best = i;
  }
  return best;
}

double ImpulseResponse::direct_path_energy(std::size_t half_width) const noexcept {
  const std::size_t peak = direct_path_index();
  const std::size_t lo = peak > half_width ? peak - half_width : 0;
  const std::size_t hi = std::min(taps_.size() - 1, peak + half_width);
  double acc = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) acc += taps_[i] * taps_[i];
  return acc;
}

ImpulseResponse ImpulseResponse::scaled(double gain) const {
  std::vector<double> out(taps_);
  for (double& t : out) t *= gain;
  return ImpulseResponse(std::move(out), sample_rate_hz_);
}

}  // namespace ancbound
