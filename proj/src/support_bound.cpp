#include "ancbound/support_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "ancbound/errors.hpp"
#include "ancbound/fft.hpp"
#include "ancbound/info_bound.hpp"

namespace ancbound {

namespace {

double to_db(double power) {
  return power > 0.0 ? 10.0 * std::log10(power) : -std::numeric_limits<double>::infinity();
}

// Linear interpolation of the PSD at f (clamped to the grid ends).
double interp_psd(const PsdEstimate& psd, double f) {
  const auto& fx = psd.freqs_hz;
  const auto& px = psd.power_density;
  if (f <= fx.front()) return px.front();
  if (f >= fx.back()) return px.back();
  const auto it = std::upper_bound(fx.begin(), fx.end(), f);
  const std::size_t hi = static_cast<std::size_t>(it - fx.begin());
  const std::size_t lo = hi - 1;
  const double t = (f - fx[lo]) / (fx[hi] - fx[lo]);
  return px[lo] + t * (px[hi] - px[lo]);
}

BoundValue ratio_to_db(double ratio) {
  if (ratio <= 0.0) return {kDbFloor, true};
  return {10.0 * std::log10(ratio), false};
}

}  // namespace

std::size_t SupportSet::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

std::vector<double> SupportSet::magnitude_db() const {
  std::vector<double> out(power.size());
  std::transform(power.begin(), power.end(), out.begin(), to_db);
  return out;
}

nlohmann::json SupportBoundResult::to_json() const {
  return {{"ratio_weighted", ratio_weighted},
          {"ratio_bincount", ratio_bincount},
          {"bound_db_weighted", bound_db_weighted},
          {"bound_db_bincount", bound_db_bincount},
          {"weighted_floored", weighted_floored},
          {"bincount_floored", bincount_floored},
          {"weighted_by_path_only", weighted_by_path_only},
          {"uncancelable_bins", uncancelable_bins},
          {"primary_support_bins", primary_support_bins}};
}

SupportSet spectral_support(const ImpulseResponse& ir, std::size_t fft_size, double threshold_db,
                            ThresholdMode mode) {
  if (fft_size < ir.size()) {
    throw ArgumentError("spectral_support: fft_size " + std::to_string(fft_size) +
                        " smaller than impulse response (" + std::to_string(ir.size()) + " taps)");
  }
  if (mode == ThresholdMode::kRelativeToPeak && !(threshold_db > 0.0)) {
    throw ArgumentError("spectral_support: relative threshold must be positive");
  }
  RealFft fft(fft_size);
  const auto spectrum = fft.forward(ir.taps());
  SupportSet out;
  out.fft_size = fft_size;
  out.threshold_db = threshold_db;
  out.mode = mode;
  out.sample_rate_hz = ir.sample_rate_hz();
  out.power.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) out.power[k] = std::norm(spectrum[k]);

  const double peak_db = to_db(*std::max_element(out.power.begin(), out.power.end()));
  const double level = mode == ThresholdMode::kRelativeToPeak ? peak_db - threshold_db : threshold_db;
  out.mask.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    out.mask[k] = out.power[k] > 0.0 && to_db(out.power[k]) >= level;
  }
  return out;
}

SupportBoundResult support_ratio(const SupportSet& p_sup, const SupportSet& s_sup,
                                 const std::optional<PsdEstimate>& x_psd) {
  if (p_sup.fft_size != s_sup.fft_size || p_sup.mask.size() != s_sup.mask.size()) {
    throw ArgumentError("support_ratio: supports use different FFT sizes");
  }
  if (x_psd) {
    if (x_psd->freqs_hz.empty() || x_psd->freqs_hz.size() != x_psd->power_density.size()) {
      throw ArgumentError("support_ratio: malformed source PSD");
    }
    if (x_psd->sample_rate_hz != p_sup.sample_rate_hz) {
      throw ConfigError("support_ratio: source PSD sample rate differs from the paths");
    }
  }
  SupportBoundResult r;
  r.weighted_by_path_only = !x_psd.has_value();
  const std::size_t bins = p_sup.mask.size();
  const std::size_t last = bins - 1;
  const double df = static_cast<double>(p_sup.sample_rate_hz) / static_cast<double>(p_sup.fft_size);
  double total = 0.0, unreachable = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const bool in_p = p_sup.mask[k];
    const bool unc = in_p && !s_sup.mask[k];
    r.primary_support_bins += in_p ? 1 : 0;
    r.uncancelable_bins += unc ? 1 : 0;
    // Edge bins of the one-sided grid cover half a bin of the two-sided band;
    // the Nyquist bin only exists for even FFT sizes.
    const bool edge = k == 0 || (k == last && p_sup.fft_size % 2 == 0);
    double weight = p_sup.power[k] * (edge ? 0.5 : 1.0);
    if (x_psd) weight *= interp_psd(*x_psd, static_cast<double>(k) * df);
    total += weight;
    if (unc) unreachable += weight;
  }
  if (r.primary_support_bins == 0) {
    throw UndefinedMetricError("support_ratio: primary path has empty support");
  }
  r.ratio_bincount =
      static_cast<double>(r.uncancelable_bins) / static_cast<double>(r.primary_support_bins);
  r.ratio_weighted = total > 0.0 ? std::clamp(unreachable / total, 0.0, 1.0) : 0.0;
  const BoundValue w = ratio_to_db(r.ratio_weighted);
  const BoundValue b = ratio_to_db(r.ratio_bincount);
  r.bound_db_weighted = w.db;
  r.weighted_floored = w.floored;
  r.bound_db_bincount = b.db;
  r.bincount_floored = b.floored;
  return r;
}

SupportBoundResult support_bound_db(const PathPair& paths, const std::optional<PsdEstimate>& x_psd,
                                    std::size_t fft_size, double threshold_db, ThresholdMode mode) {
  if (paths.primary.sample_rate_hz() != paths.secondary.sample_rate_hz()) {
    throw ConfigError("support_bound_db: primary and secondary sample rates differ");
  }
  const SupportSet p = spectral_support(paths.primary, fft_size, threshold_db, mode);
  const SupportSet s = spectral_support(paths.secondary, fft_size, threshold_db, mode);
  return support_ratio(p, s, x_psd);
}

void write_support_csv(const std::filesystem::path& path, const SupportSet& p_sup,
                       const SupportSet& s_sup) {
  if (p_sup.mask.size() != s_sup.mask.size()) {
    throw ArgumentError("write_support_csv: supports use different FFT sizes");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "freq_hz,in_supp_P,in_supp_S,uncancelable\n";
  const double df = static_cast<double>(p_sup.sample_rate_hz) / static_cast<double>(p_sup.fft_size);
  for (std::size_t k = 0; k < p_sup.mask.size(); ++k) {
    const bool in_p = p_sup.mask[k];
    const bool in_s = s_sup.mask[k];
    out << static_cast<double>(k) * df << ',' << (in_p ? 1 : 0) << ',' << (in_s ? 1 : 0) << ','
        << (in_p && !in_s ? 1 : 0) << '\n';
  }
}

}  // namespace ancbound
