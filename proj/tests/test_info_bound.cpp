#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <catch_amalgamated.hpp>

#include "ancbound/errors.hpp"
#include "ancbound/info_bound.hpp"
#include "oracles.hpp"

using namespace ancbound;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr int kFs = 16000;

struct GaussianPair {
  std::vector<double> d, y;
};

GaussianPair correlated(std::size_t n, double rho, std::uint64_t seed) {
  const auto a = oracle::gaussian(n, seed);
  const auto b = oracle::gaussian(n, seed + 1000003);
  GaussianPair p{a, std::vector<double>(n)};
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) p.y[i] = rho * a[i] + s * b[i];
  return p;
}

double pdf_at(const DensityEstimate& est, double x) {
  const double pos = (x - est.x_axis.lo) / est.x_axis.step;
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * est.pdf[i] + t * est.pdf[i + 1];
}

double mi_tolerance(double truth) { return std::max(0.05, 0.15 * truth); }

InfoQuantities with_alpha(double alpha) {
  InfoQuantities q;
  q.alpha = alpha;
  return q;
}

}  // namespace

TEST_CASE("KdeConfig validation", "[info][config]") {
  KdeConfig c;
  CHECK_NOTHROW(c.validate());
  c.bin_count = 7;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = KdeConfig{};
  c.frame_hop = c.frame_len + 1;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = KdeConfig{};
  c.bandwidth_scale = 0.0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
}

TEST_CASE("KDE of a repeated value stays within three bandwidths", "[info][kde]") {
  const std::vector<double> values(500, 0.3);
  GridAxis axis;
  axis.lo = -1.0;
  axis.step = 0.02;
  axis.count = 101;
  axis.bandwidth = 0.05;
  const std::span<const double> frame(values);
  const auto est = kde_pdf(std::span<const std::span<const double>>(&frame, 1), axis);
  CHECK_THAT(est.integral(), WithinAbs(1.0, 1e-6));
  double near = 0.0;
  for (int i = 0; i < axis.count; ++i) {
    if (std::abs(axis.point(i) - 0.3) <= 3.0 * axis.bandwidth + 1e-12) near += est.pdf[static_cast<std::size_t>(i)];
  }
  CHECK(near * est.cell_measure > 0.99);
}

TEST_CASE("zero-range data collapses to a single cell", "[info][kde]") {
  const std::vector<double> values(256, -2.0);
  const auto axis = make_axis(values, 128, 1.0);
  CHECK(axis.degenerate);
  const std::span<const double> frame(values);
  const auto est = kde_pdf(std::span<const std::span<const double>>(&frame, 1), axis);
  CHECK_THAT(est.integral(), WithinAbs(1.0, 1e-9));
  CHECK(histogram_entropy(est) == 0.0);
}

TEST_CASE("KDE of standard normal samples matches the analytic pdf", "[info][kde]") {
  const auto v = oracle::gaussian(100000, 5);
  const auto axis = make_axis(v, 128, 1.0);
  const std::span<const double> frame(v);
  const auto est = kde_pdf(std::span<const std::span<const double>>(&frame, 1), axis);
  const double at0 = pdf_at(est, 0.0);
  CHECK(at0 >= 0.37);
  CHECK(at0 <= 0.43);
  CHECK_THAT(at0, WithinAbs(oracle::normal_pdf(0.0), 0.02));
  CHECK_THAT(est.integral(), WithinAbs(1.0, 1e-6));
  CHECK(est.normalization_residual < 1e-6);
  CHECK(std::all_of(est.pdf.begin(), est.pdf.end(), [](double p) { return p >= 0.0; }));
}

TEST_CASE("joint KDE of independent normals factorizes", "[info][kde]") {
  const auto a = oracle::gaussian(100000, 6);
  const auto b = oracle::gaussian(100000, 7);
  const auto ax = make_axis(a, 64, 1.0);
  const auto ay = make_axis(b, 64, 1.0);
  const std::span<const double> fa(a), fb(b);
  const auto frames_a = std::span<const std::span<const double>>(&fa, 1);
  const auto frames_b = std::span<const std::span<const double>>(&fb, 1);
  const auto joint = kde_pdf(frames_a, frames_b, ax, ay);
  const auto pa = kde_pdf(frames_a, ax);
  const auto pb = kde_pdf(frames_b, ay);
  CHECK_THAT(joint.integral(), WithinAbs(1.0, 1e-6));
  double worst = 0.0;
  for (int i = 0; i < ax.count; ++i) {
    for (int j = 0; j < ay.count; ++j) {
      const double prod = pa.pdf[static_cast<std::size_t>(i)] * pb.pdf[static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(joint.pdf[static_cast<std::size_t>(i) * ay.count + j] - prod));
    }
  }
  CHECK(worst < 0.02);
}

TEST_CASE("histogram_entropy reference values", "[info][entropy]") {
  DensityEstimate uniform;
  uniform.x_axis.count = 50;
  uniform.cell_measure = 0.1;
  uniform.pdf.assign(50, 1.0 / (50 * 0.1));
  CHECK_THAT(histogram_entropy(uniform), WithinAbs(std::log(50.0), 1e-12));

  DensityEstimate spike = uniform;
  std::fill(spike.pdf.begin(), spike.pdf.end(), 0.0);
  spike.pdf[17] = 1.0 / 0.1;
  CHECK(histogram_entropy(spike) == 0.0);

  // Standard normal sampled on 128 points over +/-5 sigma.
  DensityEstimate normal;
  normal.x_axis.count = 128;
  normal.x_axis.lo = -5.0;
  normal.x_axis.step = 10.0 / 127.0;
  normal.cell_measure = normal.x_axis.step;
  double total = 0.0;
  for (int i = 0; i < 128; ++i) {
    normal.pdf.push_back(oracle::normal_pdf(normal.x_axis.point(i)));
    total += normal.pdf.back() * normal.cell_measure;
  }
  for (double& p : normal.pdf) p /= total;
  const double analytic = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) - std::log(normal.x_axis.step);
  CHECK_THAT(histogram_entropy(normal), WithinRel(analytic, 0.05));
}

TEST_CASE("independent signals carry almost no information", "[info][mi]") {
  const Waveform d(oracle::gaussian(100000, 8), kFs);
  const Waveform y(oracle::gaussian(100000, 9), kFs);
  const auto q = mutual_information(d, y);
  CHECK(q.mi <= 0.05);
  CHECK(q.alpha < 0.02);
  CHECK(q.mi >= 0.0);
  CHECK(q.frames == 100000 / 4096);
}

TEST_CASE("Gaussian mutual information matches the analytic value", "[info][mi]") {
  for (double rho : {0.0, 0.5, 0.9}) {
    const auto p = correlated(100000, rho, 10);
    const auto q = mutual_information(Waveform(p.d, kFs), Waveform(p.y, kFs));
    const double truth = oracle::gaussian_mi(rho);
    INFO("rho " << rho << " mi " << q.mi << " truth " << truth);
    CHECK(std::abs(q.mi - truth) <= mi_tolerance(truth));
  }
}

TEST_CASE("identical signals give the largest alpha of the mixing family", "[info][mi]") {
  // A smoothing KDE never reaches the discrete self-information limit, so
  // y = d is checked relative to partially mixed signals.
  const auto d = oracle::gaussian(65536, 11);
  const auto noise = oracle::gaussian(65536, 12);
  const auto self = mutual_information(Waveform(d, kFs), Waveform(d, kFs));
  std::vector<double> mixed(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) mixed[i] = 0.75 * d[i] + 0.25 * noise[i];
  const auto part = mutual_information(Waveform(d, kFs), Waveform(mixed, kFs));
  CHECK(self.alpha > part.alpha);
  CHECK(self.alpha > 0.5);
  CHECK(self.alpha <= 1.0 - kAlphaEpsilon);
  CHECK_THAT(self.mi, WithinAbs(self.h_d - (self.h_joint - self.h_y), 1e-12));
}

TEST_CASE("a silent canceller carries zero information", "[info][mi]") {
  const Waveform d(oracle::gaussian(20000, 13), kFs);
  const Waveform y(std::vector<double>(20000, 0.0), kFs);
  const auto q = mutual_information(d, y);
  CHECK(q.degenerate_y);
  CHECK(q.h_y == 0.0);
  CHECK(q.mi == 0.0);
  CHECK(q.alpha == 0.0);
}

TEST_CASE("mutual_information errors", "[info][mi]") {
  const Waveform shortw(oracle::gaussian(1000, 14), kFs);
  CHECK_THROWS_AS(mutual_information(shortw, shortw), ArgumentError);
  const Waveform a(oracle::gaussian(5000, 15), kFs);
  const Waveform b(oracle::gaussian(5001, 16), kFs);
  CHECK_THROWS_AS(mutual_information(a, b), ArgumentError);
}

TEST_CASE("mutual information is exactly symmetric", "[info][mi][property]") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto p = correlated(20000, 0.2 * static_cast<double>(seed % 5), 100 + seed);
    std::vector<double> y = p.y;
    for (double& v : y) v = v * (1.0 + 0.3 * static_cast<double>(seed)) + std::tanh(v);
    const Waveform dw(p.d, kFs), yw(y, kFs);
    const auto fwd = mutual_information(dw, yw);
    const auto rev = mutual_information(yw, dw);
    INFO("seed " << seed);
    CHECK(fwd.mi == rev.mi);
    CHECK(fwd.h_joint == rev.h_joint);
  }
}

TEST_CASE("alpha stays in range and mi is nonnegative", "[info][mi][property]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto p = correlated(16384, -0.9 + 0.25 * static_cast<double>(seed), 200 + seed);
    const auto q = mutual_information(Waveform(p.d, kFs), Waveform(p.y, kFs));
    CHECK(q.mi >= 0.0);
    CHECK(q.alpha >= 0.0);
    CHECK(q.alpha <= 1.0 - kAlphaEpsilon);
  }
}

TEST_CASE("alpha is nondecreasing in the mixing weight", "[info][mi][property]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto d = oracle::gaussian(65536, 300 + seed);
    const auto noise = oracle::gaussian(65536, 400 + seed);
    double prev = -1.0;
    for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      std::vector<double> y(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) y[i] = lambda * d[i] + (1.0 - lambda) * noise[i];
      const double alpha = mutual_information(Waveform(d, kFs), Waveform(y, kFs)).alpha;
      INFO("seed " << seed << " lambda " << lambda);
      CHECK(alpha >= prev);
      prev = alpha;
    }
  }
}

TEST_CASE("doubling the grid barely moves the Gaussian estimate", "[info][mi][property]") {
  const auto p = correlated(100000, 0.9, 20);
  const Waveform d(p.d, kFs), y(p.y, kFs);
  KdeConfig fine;
  fine.bin_count = 256;
  const double coarse_mi = mutual_information(d, y).mi;
  const double fine_mi = mutual_information(d, y, fine).mi;
  CHECK(std::abs(fine_mi - coarse_mi) / coarse_mi < 0.10);
}

TEST_CASE("info_bound_db linear form", "[info][bound]") {
  const ImpulseResponse unit({1.0}, kFs);
  const ImpulseResponse quarter({0.5}, kFs);
  CHECK_THAT(info_bound_db(with_alpha(0.0), unit, InfoBoundVariant::kLinear).db, WithinAbs(0.0, 1e-12));
  CHECK_THAT(info_bound_db(with_alpha(0.9), unit, InfoBoundVariant::kLinear).db, WithinAbs(-10.0, 1e-9));
  CHECK_THAT(info_bound_db(with_alpha(0.5), quarter, InfoBoundVariant::kLinear).db,
             WithinAbs(10.0 * std::log10(0.5) + 10.0 * std::log10(0.25), 1e-9));
  CHECK_THAT(info_bound_db(with_alpha(0.5), quarter, InfoBoundVariant::kLinear).db, WithinAbs(-9.03, 0.005));
}

TEST_CASE("info_bound_db at the alpha ceiling reports the floor", "[info][bound]") {
  InfoQuantities q = with_alpha(1.0 - kAlphaEpsilon);
  q.alpha_at_ceiling = true;
  const auto b = info_bound_db(q, ImpulseResponse({1.0}, kFs), InfoBoundVariant::kLinear);
  CHECK(b.floored);
  CHECK(b.db == kDbFloor);
  CHECK_THROWS_AS(info_bound_db(with_alpha(1.0), ImpulseResponse({1.0}, kFs), InfoBoundVariant::kLinear),
                  ArgumentError);
}

TEST_CASE("path energy modes", "[info][bound]") {
  const ImpulseResponse p({0.0, 0.1, 0.0, 0.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.2}, kFs);
  CHECK_THAT(path_energy(p, PathEnergyMode::kFullEnergy), WithinAbs(0.01 + 1.0 + 0.25 + 0.04, 1e-12));
  CHECK_THAT(path_energy(p, PathEnergyMode::kDirectPath), WithinAbs(1.0 + 0.25, 1e-12));
}

TEST_CASE("exponential variant is near 0 dB for an uninformative Gaussian canceller", "[info][bound]") {
  // With I = 0 and Gaussian d, exp(2H) / (2 pi e) is the variance itself.
  const Waveform d(oracle::gaussian(100000, 30, 2.0), kFs);
  const Waveform y(oracle::gaussian(100000, 31), kFs);
  const auto q = mutual_information(d, y);
  CHECK_THAT(info_bound_db(q, ImpulseResponse({1.0}, kFs), InfoBoundVariant::kExponential).db,
             WithinAbs(0.0, 0.5));
}
