#include "ancbound/info_bound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "ancbound/dsp.hpp"
#include "ancbound/errors.hpp"

namespace ancbound {

namespace {

// Kernel evaluated out to this many bandwidths; exp(-32) is below double
// resolution relative to the peak.
constexpr double kKernelCutoff = 8.0;

struct KernelRow {
  int start = 0;
  std::vector<double> w;
};

void kernel_row(const GridAxis& axis, double v, KernelRow& row) {
  if (axis.degenerate) {
    row.start = std::clamp(static_cast<int>(std::lround((v - axis.lo) / axis.step)), 0, axis.count - 1);
    row.w.assign(1, 1.0);
    return;
  }
  const double reach = kKernelCutoff * axis.bandwidth;
  const int lo = std::max(0, static_cast<int>(std::ceil((v - reach - axis.lo) / axis.step)));
  const int hi = std::min(axis.count - 1, static_cast<int>(std::floor((v + reach - axis.lo) / axis.step)));
  row.start = lo;
  row.w.resize(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
  const double inv_h = 1.0 / axis.bandwidth;
  for (int i = lo; i <= hi; ++i) {
    const double z = (axis.point(i) - v) * inv_h;
    row.w[static_cast<std::size_t>(i - lo)] = std::exp(-0.5 * z * z);
  }
}

void check_in_range(std::span<const double> values, const GridAxis& axis) {
  const double tol = 1e-9 * std::max(1.0, std::abs(axis.hi()) + std::abs(axis.lo));
  for (double v : values) {
    if (!(v >= axis.lo - tol && v <= axis.hi() + tol)) {
      throw ArgumentError("kde_pdf: value " + std::to_string(v) + " outside evaluation grid [" +
                          std::to_string(axis.lo) + ", " + std::to_string(axis.hi()) + "]");
    }
  }
}

// Sum of f(m_ij) over a square matrix, pairing (i, j) with (j, i) so the
// result is bit-identical for the transpose.
template <typename F>
double symmetric_sum(const std::vector<double>& m, int n, F f) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += f(m[static_cast<std::size_t>(i) * n + i]);
    for (int j = i + 1; j < n; ++j) {
      acc += f(m[static_cast<std::size_t>(i) * n + j]) + f(m[static_cast<std::size_t>(j) * n + i]);
    }
  }
  return acc;
}

template <typename F>
double grid_sum(const DensityEstimate& d, F f) {
  if (d.is_joint() && d.x_axis.count == d.y_axis.count) {
    return symmetric_sum(d.pdf, d.x_axis.count, f);
  }
  double acc = 0.0;
  for (double v : d.pdf) acc += f(v);
  return acc;
}

double neg_mass_log_mass(double mass) { return mass > 0.0 ? -mass * std::log(mass) : 0.0; }

}  // namespace

void KdeConfig::validate() const {
  if (bin_count < 8) throw ArgumentError("KdeConfig: bin_count must be >= 8");
  if (!(bandwidth_scale > 0.0)) throw ArgumentError("KdeConfig: bandwidth_scale must be positive");
  if (frame_len == 0 || frame_hop == 0) throw ArgumentError("KdeConfig: frame sizes must be positive");
  if (frame_hop > frame_len) throw ArgumentError("KdeConfig: frame_hop must not exceed frame_len");
}

std::vector<double> GridAxis::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = point(i);
  return out;
}

GridAxis make_axis(std::span<const double> values, int bin_count, double bandwidth_scale) {
  if (values.empty()) throw ArgumentError("make_axis: no values");
  if (bin_count < 2) throw ArgumentError("make_axis: bin_count must be >= 2");
  if (!(bandwidth_scale > 0.0)) throw ArgumentError("make_axis: bandwidth must be positive");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double range = *mx - *mn;
  GridAxis axis;
  axis.count = bin_count;
  if (range > 0.0) {
    axis.bandwidth = bandwidth_scale * range / bin_count;
  } else {
    axis.bandwidth = 1e-3 * std::max(1.0, std::abs(*mn));
    axis.degenerate = true;
  }
  axis.lo = *mn - 3.0 * axis.bandwidth;
  axis.step = (range + 6.0 * axis.bandwidth) / (bin_count - 1);
  return axis;
}

double DensityEstimate::integral() const {
  return grid_sum(*this, [](double v) { return v; }) * cell_measure;
}

DensityEstimate kde_pdf(std::span<const std::span<const double>> frames, const GridAxis& axis) {
  if (frames.empty()) throw ArgumentError("kde_pdf: need at least one frame");
  if (!(axis.bandwidth > 0.0) || axis.count < 2) throw ArgumentError("kde_pdf: invalid axis");
  DensityEstimate out;
  out.x_axis = axis;
  out.cell_measure = axis.step;
  out.pdf.assign(static_cast<std::size_t>(axis.count), 0.0);

  std::vector<double> frame_pdf(out.pdf.size());
  KernelRow row;
  for (const auto frame : frames) {
    if (frame.empty()) throw ArgumentError("kde_pdf: empty frame");
    check_in_range(frame, axis);
    std::fill(frame_pdf.begin(), frame_pdf.end(), 0.0);
    for (double v : frame) {
      kernel_row(axis, v, row);
      for (std::size_t i = 0; i < row.w.size(); ++i) frame_pdf[row.start + i] += row.w[i];
    }
    double total = 0.0;
    for (double v : frame_pdf) total += v;
    const double scale = 1.0 / (total * out.cell_measure * static_cast<double>(frames.size()));
    for (std::size_t i = 0; i < frame_pdf.size(); ++i) out.pdf[i] += frame_pdf[i] * scale;
  }
  out.normalization_residual = std::abs(out.integral() - 1.0);
  return out;
}

DensityEstimate kde_pdf(std::span<const std::span<const double>> frames_x,
                        std::span<const std::span<const double>> frames_y,
                        const GridAxis& x_axis, const GridAxis& y_axis) {
  if (frames_x.empty() || frames_x.size() != frames_y.size()) {
    throw ArgumentError("kde_pdf: need matching, non-empty frame lists");
  }
  if (!(x_axis.bandwidth > 0.0) || !(y_axis.bandwidth > 0.0) || x_axis.count < 2 || y_axis.count < 2) {
    throw ArgumentError("kde_pdf: invalid axis");
  }
  DensityEstimate out;
  out.x_axis = x_axis;
  out.y_axis = y_axis;
  out.cell_measure = x_axis.step * y_axis.step;
  const auto ny = static_cast<std::size_t>(y_axis.count);
  out.pdf.assign(static_cast<std::size_t>(x_axis.count) * ny, 0.0);

  DensityEstimate frame_density = out;
  KernelRow rx, ry;
  const auto nframes = static_cast<double>(frames_x.size());
  for (std::size_t f = 0; f < frames_x.size(); ++f) {
    const auto fx = frames_x[f];
    const auto fy = frames_y[f];
    if (fx.empty() || fx.size() != fy.size()) throw ArgumentError("kde_pdf: frame pair size mismatch");
    check_in_range(fx, x_axis);
    check_in_range(fy, y_axis);
    auto& acc = frame_density.pdf;
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t n = 0; n < fx.size(); ++n) {
      kernel_row(x_axis, fx[n], rx);
      kernel_row(y_axis, fy[n], ry);
      for (std::size_t i = 0; i < rx.w.size(); ++i) {
        double* dst = acc.data() + (rx.start + i) * ny + ry.start;
        const double wx = rx.w[i];
        for (std::size_t j = 0; j < ry.w.size(); ++j) dst[j] += wx * ry.w[j];
      }
    }
    const double total = grid_sum(frame_density, [](double v) { return v; });
    const double scale = 1.0 / (total * out.cell_measure * nframes);
    for (std::size_t i = 0; i < acc.size(); ++i) out.pdf[i] += acc[i] * scale;
  }
  out.normalization_residual = std::abs(out.integral() - 1.0);
  return out;
}

double histogram_entropy(const DensityEstimate& density) {
  // Renormalise the cell masses so a single occupied cell gives exactly zero.
  const double total = grid_sum(density, [](double p) { return p; });
  if (!(total > 0.0)) return 0.0;
  return grid_sum(density, [total](double p) { return neg_mass_log_mass(p / total); });
}

nlohmann::json InfoQuantities::to_json() const {
  return {{"h_d", h_d},
          {"h_y", h_y},
          {"h_joint", h_joint},
          {"mi", mi},
          {"mi_raw", mi_raw},
          {"alpha", alpha},
          {"alpha_at_ceiling", alpha_at_ceiling},
          {"h_d_differential", h_d_differential},
          {"d_power", d_power},
          {"frames", frames},
          {"degenerate_d", degenerate_d},
          {"degenerate_y", degenerate_y}};
}

MutualInformationResult mutual_information_detailed(const Waveform& d, const Waveform& y,
                                                    const KdeConfig& config) {
  config.validate();
  if (d.size() != y.size()) throw ArgumentError("mutual_information: d and y must have equal length");
  if (d.size() < config.frame_len) {
    throw ArgumentError("mutual_information: signals (" + std::to_string(d.size()) +
                        " samples) shorter than one frame (" + std::to_string(config.frame_len) + ")");
  }

  std::vector<std::span<const double>> frames_d, frames_y;
  for (std::size_t start = 0; start + config.frame_len <= d.size(); start += config.frame_hop) {
    frames_d.push_back(d.samples().subspan(start, config.frame_len));
    frames_y.push_back(y.samples().subspan(start, config.frame_len));
  }
  // Grids are built from the framed samples only.
  const std::size_t used = (frames_d.size() - 1) * config.frame_hop + config.frame_len;
  const GridAxis axis_d = make_axis(d.samples().first(used), config.bin_count, config.bandwidth_scale);
  const GridAxis axis_y = make_axis(y.samples().first(used), config.bin_count, config.bandwidth_scale);

  MutualInformationResult r{{}, kde_pdf(frames_d, axis_d), kde_pdf(frames_y, axis_y),
                            kde_pdf(frames_d, frames_y, axis_d, axis_y)};
  InfoQuantities& q = r.info;
  q.frames = frames_d.size();
  q.degenerate_d = axis_d.degenerate;
  q.degenerate_y = axis_y.degenerate;
  q.h_d = histogram_entropy(r.p_d);
  q.h_y = histogram_entropy(r.p_y);
  q.h_joint = histogram_entropy(r.p_joint);
  q.mi_raw = (q.h_d + q.h_y) - q.h_joint;
  q.mi = std::max(0.0, q.mi_raw);
  if (q.h_d > 0.0) {
    const double ratio = q.mi / q.h_d;
    q.alpha_at_ceiling = ratio >= 1.0 - kAlphaEpsilon;
    q.alpha = std::clamp(ratio, 0.0, 1.0 - kAlphaEpsilon);
  }
  q.h_d_differential = q.h_d + std::log(axis_d.step);
  q.d_power = signal_power(d.samples().first(used));
  return r;
}

InfoQuantities mutual_information(const Waveform& d, const Waveform& y, const KdeConfig& config) {
  return mutual_information_detailed(d, y, config).info;
}

double path_energy(const ImpulseResponse& primary, PathEnergyMode mode) {
  return mode == PathEnergyMode::kFullEnergy ? primary.energy() : primary.direct_path_energy(2);
}

BoundValue info_bound_db(const InfoQuantities& info, const ImpulseResponse& primary,
                         InfoBoundVariant variant, PathEnergyMode mode) {
  if (!(info.alpha >= 0.0 && info.alpha < 1.0)) {
    throw ArgumentError("info_bound_db: alpha must lie in [0, 1)");
  }
  if (variant == InfoBoundVariant::kLinear) {
    const double energy = path_energy(primary, mode);
    if (info.alpha_at_ceiling || energy <= 0.0) return {kDbFloor, true};
    return {10.0 * std::log10(1.0 - info.alpha) + 10.0 * std::log10(energy), false};
  }
  if (!(info.d_power > 0.0)) return {kDbFloor, true};
  // D >= exp(2 (H - I)) / (2 pi e), in dB relative to the disturbance power.
  const double log_d = 2.0 * (info.h_d_differential - info.mi) -
                       std::log(2.0 * std::numbers::pi * std::numbers::e);
  const double db = 10.0 * (log_d - std::log(info.d_power)) / std::numbers::ln10;
  return {db, false};
}

void write_density_csv(const std::filesystem::path& path, const DensityEstimate& density) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  if (!density.is_joint()) {
    out << "x,pdf\n";
    for (int i = 0; i < density.x_axis.count; ++i) {
      out << density.x_axis.point(i) << ',' << density.pdf[static_cast<std::size_t>(i)] << '\n';
    }
    return;
  }
  out << "x,y,pdf\n";
  const int ny = density.y_axis.count;
  for (int i = 0; i < density.x_axis.count; ++i) {
    for (int j = 0; j < ny; ++j) {
      out << density.x_axis.point(i) << ',' << density.y_axis.point(j) << ','
          << density.pdf[static_cast<std::size_t>(i) * ny + j] << '\n';
    }
  }
}

}  // namespace ancbound
