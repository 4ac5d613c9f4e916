#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ancbound/signal.hpp"

namespace ancbound {

using Vec3 = std::array<double, 3>;

enum class ReverbFormula { kSabine, kEyring };

struct RoomConfig {
  Vec3 dims_m{3.0, 4.0, 2.0};
  Vec3 source_pos_m{1.5, 1.0, 1.0};
  Vec3 mic_pos_m{1.5, 3.0, 1.0};
  double t60_s = 0.2;
  int n_taps = 512;
  int sample_rate_hz = 16000;
  double sound_speed_mps = 343.0;
  bool highpass_enabled = true;
  ReverbFormula formula = ReverbFormula::kSabine;
  // Bypasses the T60 mapping, e.g. 0.0 for anechoic walls.
  std::optional<double> beta_override;

  void validate() const;
};

/// Room geometry shared by both acoustic paths of one scenario. Defaults are
/// the evaluation setup: error mic, reference mic, and cancellation speaker
/// on one line through a 3 x 4 x 2 m room.
struct RoomGeometry {
  Vec3 dims_m{3.0, 4.0, 2.0};
  Vec3 ref_mic_m{1.5, 1.0, 1.0};
  Vec3 err_mic_m{1.5, 3.0, 1.0};
  Vec3 speaker_m{1.5, 2.5, 1.0};
  int n_taps = 512;
  int sample_rate_hz = 16000;
  double sound_speed_mps = 343.0;
  bool highpass_enabled = true;
  ReverbFormula formula = ReverbFormula::kSabine;
};

struct PathPair {
  ImpulseResponse primary;    // reference mic -> error mic
  ImpulseResponse secondary;  // speaker -> error mic
};

// Uniform wall reflection coefficient for the requested T60. Sabine:
// alpha = 24 V ln(10) / (c S T60), beta = sqrt(1 - alpha). Eyring replaces
// alpha by 1 - exp(-24 V ln(10) / (c S T60)).
double beta_from_t60(const Vec3& dims_m, double t60_s, double sound_speed_mps,
                     ReverbFormula formula = ReverbFormula::kSabine);

// Allen-Berkley image method with Hann-windowed sinc fractional delays
// (40-tap kernel) and the optional 100 Hz recursive high-pass.
ImpulseResponse generate_rir(const RoomConfig& config);

PathPair simulate_paths(const RoomGeometry& geometry, double t60_s);

// Expected direct-path delay in samples: fs * |src - mic| / c.
double direct_path_delay(const Vec3& src, const Vec3& mic, int sample_rate_hz,
                         double sound_speed_mps);

nlohmann::json to_json(const RoomConfig& config);
nlohmann::json to_json(const RoomGeometry& geometry);
RoomGeometry geometry_from_json(const nlohmann::json& j, RoomGeometry base = {});

// 64-bit FNV-1a over the canonical JSON dump.
std::uint64_t config_hash(const nlohmann::json& j);
std::string hash_hex(std::uint64_t h);

// JSON form: {"sample_rate_hz": fs, "config_hash": "...", "taps": [...], ...}.
nlohmann::json rir_to_json(const ImpulseResponse& ir, const nlohmann::json& metadata = {});
ImpulseResponse rir_from_json(const nlohmann::json& j);
void save_rir_json(const std::filesystem::path& path, const ImpulseResponse& ir,
                   const nlohmann::json& metadata = {});
ImpulseResponse load_rir(const std::filesystem::path& path);  // .json or .wav

}  // namespace ancbound
