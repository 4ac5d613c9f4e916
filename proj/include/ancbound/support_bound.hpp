#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "ancbound/dsp.hpp"
#include "ancbound/room.hpp"
#include "ancbound/signal.hpp"

namespace ancbound {

enum class ThresholdMode {
  kRelativeToPeak,  // bin in support iff |H|_dB >= peak_dB - threshold_db
  kAbsolute,        // bin in support iff |H|_dB >= threshold_db
};

/// One-sided spectral support of an impulse response on an FFT grid.
struct SupportSet {
  std::size_t fft_size = 0;
  std::vector<bool> mask;            // fft_size / 2 + 1 bins
  std::vector<double> power;         // |H(k)|^2
  double threshold_db = 0.0;
  ThresholdMode mode = ThresholdMode::kRelativeToPeak;
  int sample_rate_hz = 0;

  std::size_t count() const;
  std::vector<double> magnitude_db() const;
};

struct SupportBoundResult {
  double ratio_weighted = 0.0;
  double ratio_bincount = 0.0;
  double bound_db_weighted = 0.0;
  double bound_db_bincount = 0.0;
  bool weighted_floored = false;
  bool bincount_floored = false;
  // No source PSD was given; bins are weighted by |P|^2 alone.
  bool weighted_by_path_only = false;
  std::size_t uncancelable_bins = 0;
  std::size_t primary_support_bins = 0;

  nlohmann::json to_json() const;
};

SupportSet spectral_support(const ImpulseResponse& ir, std::size_t fft_size, double threshold_db,
                            ThresholdMode mode = ThresholdMode::kRelativeToPeak);

// Bin-count ratio |supp(P) \ supp(S)| / |supp(P)| and the weighted ratio
//   sum_{supp(P) \ supp(S)} |P|^2 S_xx / sum_{all bins} |P|^2 S_xx
// with half weight on the DC and Nyquist bins of the one-sided grid.
// x_psd is interpolated onto the FFT bin frequencies.
SupportBoundResult support_ratio(const SupportSet& p_sup, const SupportSet& s_sup,
                                 const std::optional<PsdEstimate>& x_psd);

SupportBoundResult support_bound_db(const PathPair& paths, const std::optional<PsdEstimate>& x_psd,
                                    std::size_t fft_size = 1024, double threshold_db = 45.0,
                                    ThresholdMode mode = ThresholdMode::kRelativeToPeak);

// Columns: freq_hz, in_supp_P, in_supp_S, uncancelable.
void write_support_csv(const std::filesystem::path& path, const SupportSet& p_sup,
                       const SupportSet& s_sup);

}  // namespace ancbound
