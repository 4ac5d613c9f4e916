#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ancbound/room.hpp"
#include "ancbound/signal.hpp"

namespace ancbound {

struct FxlmsConfig {
  int filter_len = 256;
  double step_size = 0.02;
  double leak = 0.0;
  bool normalize = true;
  // Secondary-path model used to filter the reference. Empty means "use the
  // true secondary path".
  std::optional<ImpulseResponse> secondary_estimate;
  // Regularizer added to the reference power when normalizing.
  double regularization = 1e-8;

  void validate() const;
};

struct NullCanceller {};
struct FxlmsCanceller {
  FxlmsConfig config;
};
// Anti-noise produced elsewhere (a learned model, a recording, ...).
struct ExternalCanceller {
  Waveform y;
  std::string source;
};
using Canceller = std::variant<NullCanceller, FxlmsCanceller, ExternalCanceller>;

std::string canceller_name(const Canceller& c);

/// Aligned signal chain of one feedforward run: x reference, d = P*x
/// disturbance, y loudspeaker drive, a = S*y anti-noise, e = d - a.
struct AncRun {
  Waveform x, d, y, a, e;
};

// Adapts W on-line and returns y. The error used for adaptation is formed
// against secondary_true inside the loop. Throws DivergenceError when the
// running RMS of e exceeds 1e3 * RMS(d).
Waveform run_fxlms(const Waveform& x, const Waveform& d, const FxlmsConfig& config,
                   const ImpulseResponse& secondary_true);

// Same, also returning the final filter taps.
struct FxlmsResult {
  Waveform y;
  std::vector<double> weights;
};
FxlmsResult run_fxlms_detailed(const Waveform& x, const Waveform& d, const FxlmsConfig& config,
                               const ImpulseResponse& secondary_true);

AncRun run_pipeline(const Waveform& x, const PathPair& paths, const Canceller& canceller);

struct IngestResult {
  Waveform y;
  bool resampled = false;
  bool length_adjusted = false;
  bool downmixed = false;
  int original_rate_hz = 0;
  std::size_t original_len = 0;
  std::vector<std::string> warnings;

  nlohmann::json provenance() const;
};

// Reads a WAV anti-noise track and standardizes it to the expected format.
// Multi-channel files keep channel 0 (with a warning).
IngestResult ingest_external_y(const std::filesystem::path& path, int expected_rate_hz,
                               std::size_t expected_len);

// 64-bit FNV-1a over the raw sample bytes.
std::string waveform_hash(const Waveform& w);

nlohmann::json run_manifest(const AncRun& run, const Canceller& canceller,
                            const nlohmann::json& config, std::uint64_t seed);

// Writes x.wav, d.wav, y.wav, a.wav, e.wav (float32) and manifest.json.
void export_run(const std::filesystem::path& dir, const AncRun& run,
                const nlohmann::json& manifest);

}  // namespace ancbound
