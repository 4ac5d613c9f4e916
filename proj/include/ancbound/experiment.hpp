#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ancbound/anc.hpp"
#include "ancbound/dsp.hpp"
#include "ancbound/info_bound.hpp"
#include "ancbound/room.hpp"
#include "ancbound/signal.hpp"
#include "ancbound/support_bound.hpp"

namespace ancbound {

// 10 log10(power(e) / power(d)); e == 0 maps to kDbFloor with floored set.
BoundValue nmse_db(const Waveform& e, const Waveform& d);

inline double unified_bound_db(double info_db, double support_db) {
  return info_db > support_db ? info_db : support_db;
}

enum class NoiseKind { kWhite, kBabble, kEngine, kFactory };

std::string to_string(NoiseKind kind);
NoiseKind parse_noise_kind(const std::string& name);

// Desk-scale stand-ins for recorded noise, normalized to unit RMS.
//  white   - i.i.d. Gaussian
//  babble  - sum of band-passed noises with syllabic-rate AM
//  engine  - harmonic comb with slow speed wobble over a weak noise floor
//  factory - coloured broadband noise with decaying impulsive transients
Waveform synth_noise(NoiseKind kind, double seconds, int sample_rate_hz, std::uint64_t seed);

enum class SupportVariant { kWeighted, kBinCount };

/// Every knob of a bound sweep. JSON keys mirror the field names; see
/// README for the schema.
struct ExperimentConfig {
  RoomGeometry geometry;
  std::vector<double> t60_list{0.15, 0.175, 0.2, 0.225, 0.25};
  // "synth:<kind>" or a WAV path.
  std::vector<std::string> noise_inputs{"synth:white", "synth:babble", "synth:engine",
                                        "synth:factory"};
  // "fxlms", "null" or "external:<path template>" ({noise} and {t60} expand).
  std::vector<std::string> cancellers{"fxlms", "null"};
  FxlmsConfig fxlms;
  KdeConfig kde;
  WelchOptions welch;
  std::size_t support_fft_size = 1024;
  double support_threshold_db = 45.0;
  ThresholdMode support_threshold_mode = ThresholdMode::kRelativeToPeak;
  SupportVariant unified_support = SupportVariant::kWeighted;
  PathEnergyMode ep_mode = PathEnergyMode::kFullEnergy;
  double seconds = 3.0;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

// Applies "key=value" to a JSON config; value is parsed as JSON when it
// parses, else taken as a string. Dotted keys address nested objects.
void apply_override(nlohmann::json& config, const std::string& assignment);

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides = {});

struct BoundRow {
  std::string noise_id;
  double t60_s = 0.0;
  std::string canceller;
  double nmse_db = 0.0;
  bool nmse_floored = false;
  double info_bound_lin_db = 0.0;  // for the configured E_P mode
  bool info_lin_floored = false;
  double info_bound_lin_full_db = 0.0;
  double info_bound_lin_direct_db = 0.0;
  double info_bound_exp_db = 0.0;
  std::string info_ep_mode = "full";
  double support_bound_weighted_db = 0.0;
  double support_bound_bincount_db = 0.0;
  SupportBoundResult support;
  double unified_bound_db = 0.0;
  bool bound_holds = false;
  std::uint64_t seed = 0;
  std::uint64_t row_seed = 0;
  std::string config_hash;
  InfoQuantities info;
  std::optional<std::string> error;

  nlohmann::json to_json() const;
};

// Deterministic per-row seed derived from (seed, noise_id, t60).
std::uint64_t derive_seed(std::uint64_t seed, const std::string& noise_id,
                          std::optional<double> t60 = std::nullopt);

struct NoiseInput {
  std::string id;  // kind name for synth inputs, file stem otherwise
  Waveform x;
};

// Loads "synth:<kind>" (seeded from config.seed and the kind) or a WAV path,
// standardized to the configured rate and duration.
NoiseInput load_noise_input(const std::string& input, const ExperimentConfig& config);

// Builds the canceller named in the config ("fxlms", "null", "external:...").
Canceller make_canceller(const std::string& name, const std::string& noise_id, double t60_s,
                         const ExperimentConfig& config, std::size_t expected_len);

// Evaluates one run: NMSE, both bounds, unified bound.
BoundRow evaluate_run(const AncRun& run, const PathPair& paths, const ExperimentConfig& config);

// Rows ordered noise-major, then T60, then canceller. Unreadable inputs and
// canceller failures become row errors; an infeasible room aborts.
std::vector<BoundRow> run_sweep(const ExperimentConfig& config);

enum class ReportFormat { kCsv, kJson };

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{
      "noise_id", "t60_s", "canceller", "nmse_db", "info_bound_lin_db", "info_bound_exp_db",
      "info_ep_mode", "support_bound_weighted_db", "support_bound_bincount_db", "unified_bound_db",
      "bound_holds", "seed", "config_hash"};
  return cols;
}

std::string report_csv(const std::vector<BoundRow>& rows);
nlohmann::json report_json(const std::vector<BoundRow>& rows, const nlohmann::json& config);
void write_report(const std::filesystem::path& path, const std::vector<BoundRow>& rows,
                  ReportFormat format, const nlohmann::json& config = nlohmann::json::object());
std::vector<BoundRow> parse_report_csv(const std::string& text);
std::vector<BoundRow> read_report_csv(const std::filesystem::path& path);

}  // namespace ancbound
