#include "ancbound/anc.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "ancbound/dsp.hpp"
#include "ancbound/errors.hpp"
#include "ancbound/wav.hpp"

namespace ancbound {

namespace {

constexpr double kDivergenceFactor = 1e3;
constexpr double kErrorSmoothing = 1.0 / 1024.0;

// Tapped delay line stored twice so the newest-first window is contiguous.
class DelayLine {
 public:
  explicit DelayLine(std::size_t len) : len_(len), buf_(2 * len, 0.0) {}

  void push(double v) {
    pos_ = pos_ == 0 ? len_ - 1 : pos_ - 1;
    buf_[pos_] = v;
    buf_[pos_ + len_] = v;
  }
  // [v_n, v_{n-1}, ..., v_{n-len+1}]
  const double* window() const { return buf_.data() + pos_; }

 private:
  std::size_t len_;
  std::size_t pos_ = 0;
  std::vector<double> buf_;
};

double dot(const double* a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::string format_step(double mu) {
  std::ostringstream os;
  os << mu;
  return os.str();
}

}  // namespace

void FxlmsConfig::validate() const {
  if (filter_len < 1) throw ArgumentError("FxlmsConfig: filter_len must be >= 1");
  if (!(step_size >= 0.0)) throw ArgumentError("FxlmsConfig: step_size must be non-negative");
  if (!(leak >= 0.0 && leak < 1.0)) throw ArgumentError("FxlmsConfig: leak must lie in [0, 1)");
  if (!(regularization > 0.0)) throw ArgumentError("FxlmsConfig: regularization must be positive");
}

std::string canceller_name(const Canceller& c) {
  if (std::holds_alternative<NullCanceller>(c)) return "null";
  if (std::holds_alternative<FxlmsCanceller>(c)) return "fxlms";
  return "external";
}

FxlmsResult run_fxlms_detailed(const Waveform& x, const Waveform& d, const FxlmsConfig& config,
                               const ImpulseResponse& secondary_true) {
  config.validate();
  if (x.size() != d.size()) throw ArgumentError("run_fxlms: x and d must have equal length");
  if (x.sample_rate_hz() != d.sample_rate_hz() ||
      x.sample_rate_hz() != secondary_true.sample_rate_hz()) {
    throw ConfigError("run_fxlms: sample rate mismatch");
  }
  const ImpulseResponse& s_hat =
      config.secondary_estimate ? *config.secondary_estimate : secondary_true;
  if (s_hat.sample_rate_hz() != x.sample_rate_hz()) {
    throw ConfigError("run_fxlms: secondary-path estimate has a different sample rate");
  }

  const auto len = static_cast<std::size_t>(config.filter_len);
  const std::vector<double>& s_true = secondary_true.vec();
  const std::vector<double>& s_est = s_hat.vec();
  std::vector<double> w(len, 0.0);
  DelayLine x_line(len);
  DelayLine x_for_est(s_est.size());
  DelayLine xf_line(len);
  DelayLine y_line(s_true.size());

  const double rms_d = std::sqrt(d.empty() ? 0.0 : signal_power(d));
  const double limit = kDivergenceFactor * rms_d;
  const double decay = 1.0 - config.step_size * config.leak;
  double err_power = 0.0;

  std::vector<double> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    x_line.push(x[n]);
    x_for_est.push(x[n]);
    const double yn = dot(x_line.window(), w);
    y[n] = yn;
    y_line.push(yn);
    const double e = d[n] - dot(y_line.window(), s_true);
    xf_line.push(dot(x_for_est.window(), s_est));

    err_power += kErrorSmoothing * (e * e - err_power);
    if (!std::isfinite(e) || (rms_d > 0.0 && std::sqrt(err_power) > limit)) {
      throw DivergenceError("FxLMS diverged at sample " + std::to_string(n) +
                                " with step size mu = " + format_step(config.step_size),
                            config.step_size);
    }

    const double* xf = xf_line.window();
    double gain = config.step_size * e;
    if (config.normalize) {
      double power = 0.0;
      for (std::size_t i = 0; i < len; ++i) power += xf[i] * xf[i];
      gain /= power + config.regularization;
    }
    for (std::size_t i = 0; i < len; ++i) w[i] = decay * w[i] + gain * xf[i];
  }
  return {Waveform(std::move(y), x.sample_rate_hz()), std::move(w)};
}

Waveform run_fxlms(const Waveform& x, const Waveform& d, const FxlmsConfig& config,
                   const ImpulseResponse& secondary_true) {
  return run_fxlms_detailed(x, d, config, secondary_true).y;
}

AncRun run_pipeline(const Waveform& x, const PathPair& paths, const Canceller& canceller) {
  if (x.empty()) throw ArgumentError("run_pipeline: empty reference signal");
  if (x.sample_rate_hz() != paths.primary.sample_rate_hz() ||
      x.sample_rate_hz() != paths.secondary.sample_rate_hz()) {
    throw ConfigError("run_pipeline: reference and path sample rates differ");
  }
  Waveform d = fft_convolve(x, paths.primary);

  Waveform y = std::visit(
      [&](const auto& c) -> Waveform {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, NullCanceller>) {
          return Waveform(std::vector<double>(x.size(), 0.0), x.sample_rate_hz());
        } else if constexpr (std::is_same_v<T, FxlmsCanceller>) {
          return run_fxlms(x, d, c.config, paths.secondary);
        } else {
          if (c.y.sample_rate_hz() != x.sample_rate_hz()) {
            throw ConfigError("run_pipeline: external y has sample rate " +
                              std::to_string(c.y.sample_rate_hz()) + " Hz, expected " +
                              std::to_string(x.sample_rate_hz()));
          }
          return c.y;
        }
      },
      canceller);
  if (y.size() != x.size()) {
    throw InternalError("run_pipeline: canceller produced " + std::to_string(y.size()) +
                        " samples for a " + std::to_string(x.size()) + "-sample reference");
  }

  Waveform a = fft_convolve(y, paths.secondary);
  std::vector<double> e(d.size());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = d[n] - a[n];
  Waveform err(std::move(e), x.sample_rate_hz());
  return AncRun{x, std::move(d), std::move(y), std::move(a), std::move(err)};
}

nlohmann::json IngestResult::provenance() const {
  nlohmann::json flags = nlohmann::json::array();
  if (resampled) flags.push_back("resampled");
  if (length_adjusted) flags.push_back("length_adjusted");
  if (downmixed) flags.push_back("channel0");
  return {{"flags", flags},
          {"original_rate_hz", original_rate_hz},
          {"original_len", original_len},
          {"warnings", warnings}};
}

IngestResult ingest_external_y(const std::filesystem::path& path, int expected_rate_hz,
                               std::size_t expected_len) {
  if (expected_rate_hz <= 0 || expected_len == 0) {
    throw ArgumentError("ingest_external_y: expected rate and length must be positive");
  }
  WavData wav = [&] {
    try {
      return read_wav(path);
    } catch (const IoError& err) {
      throw IngestionError(std::string("cannot ingest anti-noise track: ") + err.what());
    }
  }();

  const Waveform& raw = wav.channel0;
  IngestResult result{raw, false, false, false, raw.sample_rate_hz(), raw.size(), {}};
  if (wav.channels > 1) {
    result.downmixed = true;
    result.warnings.push_back(path.string() + ": " + std::to_string(wav.channels) +
                              " channels, keeping channel 0");
  }
  result.resampled = raw.sample_rate_hz() != expected_rate_hz;
  Waveform y = standardize_to_length(raw, expected_rate_hz, expected_len);
  const std::size_t natural_len =
      result.resampled ? resample(raw, expected_rate_hz).size() : raw.size();
  result.length_adjusted = natural_len != expected_len;
  if (result.resampled) {
    result.warnings.push_back(path.string() + ": resampled from " +
                              std::to_string(raw.sample_rate_hz()) + " Hz to " +
                              std::to_string(expected_rate_hz) + " Hz");
  }
  if (result.length_adjusted) {
    result.warnings.push_back(path.string() + ": length " + std::to_string(natural_len) +
                              " adjusted to " + std::to_string(expected_len));
  }
  if (y.sample_rate_hz() != expected_rate_hz || y.size() != expected_len) {
    throw IngestionError(path.string() + ": standardized track has " + std::to_string(y.size()) +
                         " samples at " + std::to_string(y.sample_rate_hz()) + " Hz, expected " +
                         std::to_string(expected_len) + " at " +
                         std::to_string(expected_rate_hz) + " Hz");
  }
  result.y = std::move(y);
  return result;
}

std::string waveform_hash(const Waveform& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : w.samples()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return hash_hex(h);
}

nlohmann::json run_manifest(const AncRun& run, const Canceller& canceller,
                            const nlohmann::json& config, std::uint64_t seed) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"canceller", canceller_name(canceller)},
          {"config", config},
          {"config_hash", hash_hex(config_hash(config))},
          {"seed", seed},
          {"sample_rate_hz", run.x.sample_rate_hz()},
          {"length", run.x.size()},
          {"hashes",
           {{"x", waveform_hash(run.x)},
            {"d", waveform_hash(run.d)},
            {"y", waveform_hash(run.y)},
            {"a", waveform_hash(run.a)},
            {"e", waveform_hash(run.e)}}},
          {"created_utc", stamp}};
}

void export_run(const std::filesystem::path& dir, const AncRun& run,
                const nlohmann::json& manifest) {
  std::filesystem::create_directories(dir);
  write_wav(dir / "x.wav", run.x);
  write_wav(dir / "d.wav", run.d);
  write_wav(dir / "y.wav", run.y);
  write_wav(dir / "a.wav", run.a);
  write_wav(dir / "e.wav", run.e);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace ancbound
