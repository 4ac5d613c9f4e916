#include "ancbound/room.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "ancbound/errors.hpp"
#include "ancbound/wav.hpp"

namespace ancbound {

namespace {

// Fractional-delay kernel support: samples -19..+20 around the arrival.
constexpr int kKernelWidth = 40;
constexpr double kHighpassCutoffHz = 100.0;

double sinc_pi(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

bool strictly_inside(const Vec3& p, const Vec3& dims) {
  for (int i = 0; i < 3; ++i) {
    if (!(p[i] > 0.0 && p[i] < dims[i])) return false;
  }
  return true;
}

std::string vec_str(const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "[%g, %g, %g]", v[0], v[1], v[2]);
  return buf;
}

Vec3 vec_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-vector, got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void RoomConfig::validate() const {
  for (double d : dims_m) {
    if (!(d > 0.0)) throw ArgumentError("RoomConfig: room dimensions must be positive");
  }
  if (!strictly_inside(source_pos_m, dims_m)) {
    throw ArgumentError("RoomConfig: source position " + vec_str(source_pos_m) + " outside room");
  }
  if (!strictly_inside(mic_pos_m, dims_m)) {
    throw ArgumentError("RoomConfig: microphone position " + vec_str(mic_pos_m) + " outside room");
  }
  if (!(t60_s > 0.0)) throw ArgumentError("RoomConfig: t60 must be positive");
  if (n_taps < 1) throw ArgumentError("RoomConfig: n_taps must be >= 1");
  if (sample_rate_hz <= 0) throw ArgumentError("RoomConfig: sample rate must be positive");
  if (!(sound_speed_mps > 0.0)) throw ArgumentError("RoomConfig: sound speed must be positive");
  if (beta_override && !(*beta_override >= 0.0 && *beta_override <= 1.0)) {
    throw ArgumentError("RoomConfig: beta override must lie in [0, 1]");
  }
}

double beta_from_t60(const Vec3& dims_m, double t60_s, double sound_speed_mps,
                     ReverbFormula formula) {
  if (!(dims_m[0] > 0 && dims_m[1] > 0 && dims_m[2] > 0)) {
    throw ArgumentError("beta_from_t60: room dimensions must be positive");
  }
  if (!(t60_s > 0.0)) throw ArgumentError("beta_from_t60: t60 must be positive");
  if (!(sound_speed_mps > 0.0)) throw ArgumentError("beta_from_t60: sound speed must be positive");
  const double volume = dims_m[0] * dims_m[1] * dims_m[2];
  const double surface =
      2.0 * (dims_m[0] * dims_m[1] + dims_m[0] * dims_m[2] + dims_m[1] * dims_m[2]);
  const double sabine = 24.0 * volume * std::numbers::ln10 / (sound_speed_mps * surface * t60_s);
  const double alpha = formula == ReverbFormula::kSabine ? sabine : 1.0 - std::exp(-sabine);
  if (alpha >= 1.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "beta_from_t60: absorption %.4f >= 1 (T60 %.4g s too short for this room)",
                  alpha, t60_s);
    throw InfeasibleConfigError(buf);
  }
  return std::sqrt(1.0 - alpha);
}

double direct_path_delay(const Vec3& src, const Vec3& mic, int sample_rate_hz,
                         double sound_speed_mps) {
  const double dx = src[0] - mic[0], dy = src[1] - mic[1], dz = src[2] - mic[2];
  return sample_rate_hz * std::sqrt(dx * dx + dy * dy + dz * dz) / sound_speed_mps;
}

ImpulseResponse generate_rir(const RoomConfig& config) {
  config.validate();
  const double beta = config.beta_override
                          ? *config.beta_override
                          : beta_from_t60(config.dims_m, config.t60_s, config.sound_speed_mps,
                                          config.formula);
  const double fs = config.sample_rate_hz;
  const int n_samples = config.n_taps;
  // Distances below are in samples.
  const double c_ts = config.sound_speed_mps / fs;
  Vec3 s{}, r{}, room{};
  for (int i = 0; i < 3; ++i) {
    s[i] = config.source_pos_m[i] / c_ts;
    r[i] = config.mic_pos_m[i] / c_ts;
    room[i] = config.dims_m[i] / c_ts;
  }

  std::vector<double> imp(static_cast<std::size_t>(n_samples), 0.0);
  std::vector<double> kernel(kKernelWidth);
  const int nx = static_cast<int>(std::ceil(n_samples / (2.0 * room[0])));
  const int ny = static_cast<int>(std::ceil(n_samples / (2.0 * room[1])));
  const int nz = static_cast<int>(std::ceil(n_samples / (2.0 * room[2])));

  for (int mx = -nx; mx <= nx; ++mx) {
    for (int my = -ny; my <= ny; ++my) {
      for (int mz = -nz; mz <= nz; ++mz) {
        for (int q = 0; q <= 1; ++q) {
          for (int j = 0; j <= 1; ++j) {
            for (int k = 0; k <= 1; ++k) {
              const double px = (1 - 2 * q) * s[0] - r[0] + 2 * mx * room[0];
              const double py = (1 - 2 * j) * s[1] - r[1] + 2 * my * room[1];
              const double pz = (1 - 2 * k) * s[2] - r[2] + 2 * mz * room[2];
              const int reflections = std::abs(mx - q) + std::abs(mx) + std::abs(my - j) +
                                      std::abs(my) + std::abs(mz - k) + std::abs(mz);
              const double dist = std::sqrt(px * px + py * py + pz * pz);
              const double fdist = std::floor(dist);
              if (fdist >= n_samples) continue;
              const double gain = std::pow(beta, reflections) / (4.0 * std::numbers::pi * dist * c_ts);
              if (gain == 0.0) continue;
              for (int n = 0; n < kKernelWidth; ++n) {
                const double t = (n - 0.5 * kKernelWidth + 1) - (dist - fdist);
                kernel[n] = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * t / kKernelWidth)) *
                            sinc_pi(std::numbers::pi * t);
              }
              const int start = static_cast<int>(fdist) - kKernelWidth / 2 + 1;
              for (int n = 0; n < kKernelWidth; ++n) {
                const int idx = start + n;
                if (idx >= 0 && idx < n_samples) imp[static_cast<std::size_t>(idx)] += gain * kernel[n];
              }
            }
          }
        }
      }
    }
  }

  if (config.highpass_enabled) {
    // Allen-Berkley: (1 - z^-1)(1 - R z^-1) / (1 - 2R cos(W) z^-1 + R^2 z^-2).
    const double w = 2.0 * std::numbers::pi * kHighpassCutoffHz / fs;
    const double r1 = std::exp(-w);
    const double b1 = 2.0 * r1 * std::cos(w);
    const double b2 = -r1 * r1;
    const double a1 = -(1.0 + r1);
    double y0 = 0.0, y1 = 0.0, y2 = 0.0;
    for (double& v : imp) {
      y2 = y1;
      y1 = y0;
      y0 = b1 * y1 + b2 * y2 + v;
      v = y0 + a1 * y1 + r1 * y2;
    }
  }
  return ImpulseResponse(std::move(imp), config.sample_rate_hz);
}

PathPair simulate_paths(const RoomGeometry& g, double t60_s) {
  RoomConfig cfg;
  cfg.dims_m = g.dims_m;
  cfg.mic_pos_m = g.err_mic_m;
  cfg.t60_s = t60_s;
  cfg.n_taps = g.n_taps;
  cfg.sample_rate_hz = g.sample_rate_hz;
  cfg.sound_speed_mps = g.sound_speed_mps;
  cfg.highpass_enabled = g.highpass_enabled;
  cfg.formula = g.formula;

  cfg.source_pos_m = g.ref_mic_m;
  ImpulseResponse primary = generate_rir(cfg);
  cfg.source_pos_m = g.speaker_m;
  ImpulseResponse secondary = generate_rir(cfg);
  return {std::move(primary), std::move(secondary)};
}

nlohmann::json to_json(const RoomConfig& c) {
  nlohmann::json j{{"dims_m", c.dims_m},
                   {"source_pos_m", c.source_pos_m},
                   {"mic_pos_m", c.mic_pos_m},
                   {"t60_s", c.t60_s},
                   {"n_taps", c.n_taps},
                   {"sample_rate_hz", c.sample_rate_hz},
                   {"sound_speed_mps", c.sound_speed_mps},
                   {"highpass_enabled", c.highpass_enabled},
                   {"formula", c.formula == ReverbFormula::kSabine ? "sabine" : "eyring"}};
  if (c.beta_override) j["beta_override"] = *c.beta_override;
  return j;
}

nlohmann::json to_json(const RoomGeometry& g) {
  return {{"room_dims", g.dims_m},
          {"ref_mic", g.ref_mic_m},
          {"err_mic", g.err_mic_m},
          {"speaker", g.speaker_m},
          {"n_taps", g.n_taps},
          {"sample_rate_hz", g.sample_rate_hz},
          {"sound_speed_mps", g.sound_speed_mps},
          {"highpass", g.highpass_enabled},
          {"reverb_formula", g.formula == ReverbFormula::kSabine ? "sabine" : "eyring"}};
}

RoomGeometry geometry_from_json(const nlohmann::json& j, RoomGeometry g) {
  if (j.contains("room_dims")) g.dims_m = vec_from_json(j["room_dims"]);
  if (j.contains("ref_mic")) g.ref_mic_m = vec_from_json(j["ref_mic"]);
  if (j.contains("err_mic")) g.err_mic_m = vec_from_json(j["err_mic"]);
  if (j.contains("speaker")) g.speaker_m = vec_from_json(j["speaker"]);
  if (j.contains("n_taps")) g.n_taps = j["n_taps"].get<int>();
  if (j.contains("sample_rate_hz")) g.sample_rate_hz = j["sample_rate_hz"].get<int>();
  if (j.contains("sound_speed_mps")) g.sound_speed_mps = j["sound_speed_mps"].get<double>();
  if (j.contains("highpass")) g.highpass_enabled = j["highpass"].get<bool>();
  if (j.contains("reverb_formula")) {
    const auto f = j["reverb_formula"].get<std::string>();
    if (f == "sabine") {
      g.formula = ReverbFormula::kSabine;
    } else if (f == "eyring") {
      g.formula = ReverbFormula::kEyring;
    } else {
      throw ConfigError("reverb_formula must be 'sabine' or 'eyring', got '" + f + "'");
    }
  }
  return g;
}

std::uint64_t config_hash(const nlohmann::json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json rir_to_json(const ImpulseResponse& ir, const nlohmann::json& metadata) {
  nlohmann::json j = metadata.is_object() ? metadata : nlohmann::json::object();
  j["sample_rate_hz"] = ir.sample_rate_hz();
  j["taps"] = ir.vec();
  if (!j.contains("config_hash") && j.contains("config")) {
    j["config_hash"] = hash_hex(config_hash(j["config"]));
  }
  return j;
}

ImpulseResponse rir_from_json(const nlohmann::json& j) {
  if (!j.contains("taps") || !j.contains("sample_rate_hz")) {
    throw ConfigError("RIR JSON needs 'taps' and 'sample_rate_hz'");
  }
  return ImpulseResponse(j["taps"].get<std::vector<double>>(), j["sample_rate_hz"].get<int>());
}

void save_rir_json(const std::filesystem::path& path, const ImpulseResponse& ir,
                   const nlohmann::json& metadata) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << rir_to_json(ir, metadata).dump(2) << '\n';
}

ImpulseResponse load_rir(const std::filesystem::path& path) {
  if (path.extension() == ".wav") {
    const WavData wav = read_wav(path);
    return ImpulseResponse(wav.channel0.vec(), wav.channel0.sample_rate_hz());
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return rir_from_json(nlohmann::json::parse(in));
}

}  // namespace ancbound
