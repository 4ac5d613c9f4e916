#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "ancbound/signal.hpp"

namespace ancbound {

inline constexpr double kAlphaEpsilon = 1e-6;
inline constexpr double kDbFloor = -80.0;

struct KdeConfig {
  int bin_count = 128;
  // Kernel width h = bandwidth_scale * data_range / bin_count.
  double bandwidth_scale = 1.0;
  std::size_t frame_len = 4096;
  std::size_t frame_hop = 4096;

  void validate() const;
};

/// Uniform evaluation axis [lo, lo + (count-1) * step] plus the kernel width
/// used on it.
struct GridAxis {
  double lo = 0.0;
  double step = 1.0;
  int count = 0;
  double bandwidth = 1.0;
  // Zero-range data: all mass goes to the cell nearest the constant value.
  bool degenerate = false;

  double point(int i) const { return lo + step * i; }
  double hi() const { return point(count - 1); }
  std::vector<double> points() const;
};

// Axis over [min - 3h, max + 3h] for the given values.
GridAxis make_axis(std::span<const double> values, int bin_count, double bandwidth_scale);

/// PDF sampled on a 1-D or 2-D grid. For 2-D, pdf is row-major with the
/// first axis as rows. Normalized so sum(pdf) * cell_measure == 1.
struct DensityEstimate {
  GridAxis x_axis;
  GridAxis y_axis;  // count == 0 for 1-D
  std::vector<double> pdf;
  double cell_measure = 1.0;
  // Largest |integral - 1| seen over the per-frame normalizations.
  double normalization_residual = 0.0;

  bool is_joint() const noexcept { return y_axis.count > 0; }
  double integral() const;
};

// Gaussian KDE of each frame on the fixed axis, each normalized by
// numerical integration, then averaged over frames.
DensityEstimate kde_pdf(std::span<const std::span<const double>> frames, const GridAxis& axis);
DensityEstimate kde_pdf(std::span<const std::span<const double>> frames_x,
                        std::span<const std::span<const double>> frames_y,
                        const GridAxis& x_axis, const GridAxis& y_axis);

// Discrete Shannon entropy (nats) of the binned mass pdf * cell_measure.
double histogram_entropy(const DensityEstimate& density);

struct InfoQuantities {
  double h_d = 0.0;  // discrete entropies, nats
  double h_y = 0.0;
  double h_joint = 0.0;
  double mi = 0.0;      // clamped at 0
  double mi_raw = 0.0;  // h_d + h_y - h_joint before clamping
  double alpha = 0.0;   // mi / h_d in [0, 1 - eps]
  bool alpha_at_ceiling = false;
  // h_d + ln(bin width): differential-entropy estimate for the exponential form.
  double h_d_differential = 0.0;
  double d_power = 0.0;
  std::size_t frames = 0;
  bool degenerate_d = false;
  bool degenerate_y = false;

  nlohmann::json to_json() const;
};

struct MutualInformationResult {
  InfoQuantities info;
  DensityEstimate p_d, p_y, p_joint;
};

// Frames d and y on aligned non-overlapping (or hopped) windows, averages
// marginal and joint KDEs on shared grids and returns I = H(d) + H(y) - H(d, y).
InfoQuantities mutual_information(const Waveform& d, const Waveform& y, const KdeConfig& config = {});
MutualInformationResult mutual_information_detailed(const Waveform& d, const Waveform& y,
                                                    const KdeConfig& config = {});

enum class InfoBoundVariant { kLinear, kExponential };
enum class PathEnergyMode { kFullEnergy, kDirectPath };

struct BoundValue {
  double db = 0.0;
  bool floored = false;  // true when the exact value is log(0) and db == kDbFloor
};

double path_energy(const ImpulseResponse& primary, PathEnergyMode mode);

// Linear: 10 log10(1 - alpha) + 10 log10(E_P).
// Exponential: 10 log10(exp(2 (H - I)) / (2 pi e) / sigma_d^2).
BoundValue info_bound_db(const InfoQuantities& info, const ImpulseResponse& primary,
                         InfoBoundVariant variant,
                         PathEnergyMode mode = PathEnergyMode::kFullEnergy);

void write_density_csv(const std::filesystem::path& path, const DensityEstimate& density);

}  // namespace ancbound
