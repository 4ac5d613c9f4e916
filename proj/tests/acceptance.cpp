// Acceptance run: one PASS/FAIL line per criterion. Criterion 7 is advisory
// and never fails the binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ancbound/anc.hpp"
#include "ancbound/dsp.hpp"
#include "ancbound/experiment.hpp"
#include "ancbound/info_bound.hpp"
#include "ancbound/room.hpp"
#include "ancbound/support_bound.hpp"
#include "ancbound/wav.hpp"
#include "oracles.hpp"

using namespace ancbound;
namespace fs = std::filesystem;

namespace {

constexpr int kFs = 16000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Outcome wiener_khinchin() {
  const auto t0 = std::chrono::steady_clock::now();
  const Waveform w(oracle::gaussian(65536, 1), kFs);
  const double sp = signal_power(w);
  const double rel = std::abs(psd_power(welch_psd(w)) - sp) / sp;
  const double t = seconds_since(t0);
  return {rel < 1e-3 && t < 1.0, fmt("relative error %.2e, %.3f s", rel, t)};
}

Outcome mi_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double rho : {0.0, 0.5, 0.9}) {
    const auto a = oracle::gaussian(100000, 2);
    const auto b = oracle::gaussian(100000, 3);
    std::vector<double> y(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) y[i] = rho * a[i] + std::sqrt(1 - rho * rho) * b[i];
    const double mi = mutual_information(Waveform(a, kFs), Waveform(y, kFs)).mi;
    const double truth = oracle::gaussian_mi(rho);
    ok = ok && std::abs(mi - truth) <= std::max(0.05, 0.15 * truth);
    detail += fmt("rho=%.1f mi=%.4f (true %.4f); ", rho, mi, truth);
  }
  const double t = seconds_since(t0);
  detail += fmt("%.2f s", t);
  return {ok && t < 30.0, detail};
}

Outcome rir_geometry() {
  const RoomGeometry g;
  const auto p = simulate_paths(g, 0.2);
  const double dp = direct_path_delay(g.ref_mic_m, g.err_mic_m, g.sample_rate_hz, g.sound_speed_mps);
  const double ds = direct_path_delay(g.speaker_m, g.err_mic_m, g.sample_rate_hz, g.sound_speed_mps);
  const auto pp = static_cast<double>(p.primary.direct_path_index());
  const auto sp = static_cast<double>(p.secondary.direct_path_index());
  const bool ok = std::abs(pp - dp) <= 1.0 && std::abs(sp - ds) <= 1.0 && p.primary.size() == 512 &&
                  p.secondary.size() == 512;
  return {ok, fmt("P peak %.0f (expected %.2f), S peak %.0f (expected %.2f), %zu taps", pp, dp, sp, ds,
                  p.primary.size())};
}

Outcome fxlms_convergence() {
  const Waveform x(oracle::gaussian(48000, 4), kFs);
  const PathPair paths{ImpulseResponse({0.0, 0.0, 0.5}, kFs), ImpulseResponse({1.0}, kFs)};
  FxlmsConfig c;
  c.filter_len = 8;
  c.step_size = 0.1;
  c.normalize = true;
  const Waveform d = fft_convolve(x, paths.primary);
  const auto r = run_fxlms_detailed(x, d, c, paths.secondary);
  const auto run = run_pipeline(x, paths, FxlmsCanceller{c});
  double pe = 0.0, pd = 0.0;
  for (std::size_t i = run.e.size() * 3 / 4; i < run.e.size(); ++i) {
    pe += run.e[i] * run.e[i];
    pd += run.d[i] * run.d[i];
  }
  const double tail = 10.0 * std::log10(pe / pd);
  const std::vector<double> wiener{0, 0, 0.5, 0, 0, 0, 0, 0};
  double worst = 0.0;
  for (std::size_t i = 0; i < wiener.size(); ++i) worst = std::max(worst, std::abs(r.weights[i] - wiener[i]));
  return {tail <= -20.0 && worst <= 0.02, fmt("final-quartile NMSE %.1f dB, max tap error %.2e", tail, worst)};
}

Outcome support_analytic() {
  const PathPair paths{ImpulseResponse({1.0}, kFs), ImpulseResponse(oracle::halfband_lowpass(1024), kFs)};
  const auto psd = welch_psd(Waveform(oracle::gaussian(48000, 5), kFs));
  const auto r = support_bound_db(paths, psd, 1024, 45.0);
  const bool ok = std::abs(r.bound_db_weighted + 3.01) <= 0.1 && std::abs(r.bound_db_bincount + 3.01) <= 0.1 &&
                  std::abs(r.bound_db_weighted - r.bound_db_bincount) <= 0.1;
  return {ok, fmt("weighted %.3f dB, bin-count %.3f dB", r.bound_db_weighted, r.bound_db_bincount)};
}

std::string default_sweep_csv;

Outcome bound_validity() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig c;
  const auto rows = run_sweep(c);
  default_sweep_csv = report_csv(rows);
  std::size_t held = 0, errors = 0;
  double worst_margin = 1e9;
  for (const auto& r : rows) {
    if (r.error) {
      ++errors;
      std::printf("  row error: %s/%g/%s: %s\n", r.noise_id.c_str(), r.t60_s, r.canceller.c_str(), r.error->c_str());
      continue;
    }
    held += r.bound_holds ? 1 : 0;
    worst_margin = std::min(worst_margin, r.nmse_db - r.unified_bound_db);
    if (!r.bound_holds) {
      std::printf("  violation: %s/%g/%s nmse %.2f < bound %.2f\n", r.noise_id.c_str(), r.t60_s,
                  r.canceller.c_str(), r.nmse_db, r.unified_bound_db);
    }
  }
  const double t = seconds_since(t0);
  const bool ok = rows.size() == 40 && errors == 0 && held == rows.size() && t < 300.0;
  return {ok, fmt("%zu/%zu rows hold, %zu errors, smallest margin %.2f dB, %.1f s", held, rows.size(), errors,
                  worst_margin, t)};
}

Outcome t60_trend() {
  constexpr int kSeeds = 10;
  const std::vector<std::string> kinds{"white", "babble", "engine", "factory"};
  std::vector<std::vector<double>> lo(kinds.size()), hi(kinds.size());
  for (int seed = 0; seed < kSeeds; ++seed) {
    ExperimentConfig c;
    c.seed = static_cast<std::uint64_t>(seed);
    c.t60_list = {0.15, 0.25};
    c.cancellers = {"fxlms"};
    for (const auto& r : run_sweep(c)) {
      if (r.error) continue;
      const auto k = static_cast<std::size_t>(std::find(kinds.begin(), kinds.end(), r.noise_id) - kinds.begin());
      (r.t60_s < 0.2 ? lo : hi)[k].push_back(r.info_bound_lin_db);
    }
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  int rising = 0;
  std::string detail;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const double a = median(lo[k]), b = median(hi[k]);
    rising += b >= a ? 1 : 0;
    detail += fmt("%s %.2f->%.2f; ", kinds[k].c_str(), a, b);
  }
  detail += fmt("%d/4 nondecreasing over %d seeds", rising, kSeeds);
  return {rising >= 3, detail};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

Outcome algorithm_independence() {
  const ExperimentConfig c;
  const auto paths = simulate_paths(c.geometry, 0.2);
  const auto x = synth_noise(NoiseKind::kBabble, c.seconds, kFs, 11);
  const auto dir = fs::temp_directory_path() / "ancbound_acceptance";
  fs::create_directories(dir);
  write_wav(dir / "y.wav", Waveform(oracle::gaussian(x.size(), 12, 0.05), kFs));
  const std::vector<Canceller> cancellers{
      FxlmsCanceller{c.fxlms}, NullCanceller{},
      ExternalCanceller{ingest_external_y(dir / "y.wav", kFs, x.size()).y, "y.wav"}};
  std::vector<SupportBoundResult> results;
  for (const auto& canceller : cancellers) {
    results.push_back(evaluate_run(run_pipeline(x, paths, canceller), paths, c).support);
  }
  fs::remove_all(dir);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && same_bits(r.ratio_weighted, results[0].ratio_weighted) &&
         same_bits(r.ratio_bincount, results[0].ratio_bincount) &&
         same_bits(r.bound_db_weighted, results[0].bound_db_weighted) &&
         same_bits(r.bound_db_bincount, results[0].bound_db_bincount);
  }
  return {ok, fmt("weighted %.17g dB, bin-count %.17g dB across fxlms/null/external",
                  results[0].bound_db_weighted, results[0].bound_db_bincount)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const std::string again = report_csv(run_sweep(ExperimentConfig{}));
  const bool in_process = !default_sweep_csv.empty() && again == default_sweep_csv;

  const auto dir = fs::temp_directory_path() / "ancbound_acceptance_cli";
  fs::create_directories(dir);
  const std::string base = std::string(ANCBOUND_CLI_PATH) +
                           " sweep --no-assert-bound --set seconds=1 --set 't60_list=[0.2]' --set seed=3 -o ";
  const auto a = dir / "a.csv", b = dir / "b.csv";
  const int ra = std::system((base + a.string() + " > /dev/null").c_str());
  const int rb = std::system((base + b.string() + " > /dev/null").c_str());
  const bool cli = ra == 0 && rb == 0 && !slurp(a).empty() && slurp(a) == slurp(b);
  fs::remove_all(dir);
  return {in_process && cli, fmt("in-process default sweep %s, CLI rerun %s", in_process ? "identical" : "DIFFERS",
                                 cli ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
    bool soft;
  };
  const std::vector<Criterion> criteria{
      {1, "Wiener-Khinchin consistency", wiener_khinchin, false},
      {2, "MI Gaussian oracle", mi_oracle, false},
      {3, "RIR direct-path geometry", rir_geometry, false},
      {4, "FxLMS toy convergence", fxlms_convergence, false},
      {5, "support bound half-band case", support_analytic, false},
      {6, "bound validity over default sweep", bound_validity, false},
      {7, "info bound rises with T60 (soft)", t60_trend, true},
      {8, "support bound algorithm independence", algorithm_independence, false},
      {9, "sweep determinism", determinism, false},
  };
  int hard_failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const char* verdict = o.pass ? "PASS" : (c.soft ? "FAIL (soft, logged)" : "FAIL");
    std::printf("criterion %d [%s]: %s - %s\n", c.id, c.name, verdict, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !c.soft) ++hard_failures;
  }
  std::printf("%d hard failure(s)\n", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
