#include "ancbound/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "ancbound/errors.hpp"
#include "ancbound/wav.hpp"

namespace ancbound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// RBJ band-pass, 0 dB peak gain.
class Biquad {
 public:
  static Biquad bandpass(double f0, double q, double fs) {
    const double w0 = 2.0 * std::numbers::pi * f0 / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad f;
    f.b0_ = alpha / a0;
    f.b1_ = 0.0;
    f.b2_ = -alpha / a0;
    f.a1_ = -2.0 * std::cos(w0) / a0;
    f.a2_ = (1.0 - alpha) / a0;
    return f;
  }
  double operator()(double x) {
    const double y = b0_ * x + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_ = 1, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

void normalize_rms(std::vector<double>& v) {
  double acc = 0.0;
  for (double s : v) acc += s * s;
  const double rms = std::sqrt(acc / static_cast<double>(v.size()));
  if (rms > 0.0) {
    for (double& s : v) s /= rms;
  }
}

std::vector<double> babble(std::size_t n, double fs, std::mt19937_64& rng) {
  constexpr int kTalkers = 8;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni;
  std::vector<double> out(n, 0.0);
  for (int t = 0; t < kTalkers; ++t) {
    Biquad formant = Biquad::bandpass(300.0 + 2200.0 * uni(rng), 1.5 + 2.5 * uni(rng), fs);
    const double am_rate = 2.0 + 4.0 * uni(rng);
    const double am_phase = 2.0 * std::numbers::pi * uni(rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double env = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * am_rate * i / fs + am_phase);
      out[i] += env * env * formant(gauss(rng));
    }
  }
  return out;
}

std::vector<double> engine(std::size_t n, double fs, std::mt19937_64& rng) {
  constexpr int kHarmonics = 12;
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni;
  const double f0 = 80.0 + 40.0 * uni(rng);
  std::vector<double> phase0(kHarmonics);
  for (double& p : phase0) p = 2.0 * std::numbers::pi * uni(rng);
  std::vector<double> out(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // 0.5% speed wobble at 2 Hz.
    phase += 2.0 * std::numbers::pi * f0 * (1.0 + 0.005 * std::sin(2.0 * std::numbers::pi * 2.0 * i / fs)) / fs;
    double v = 0.0;
    for (int h = 1; h <= kHarmonics; ++h) v += std::sin(h * phase + phase0[h - 1]) / std::sqrt(h);
    out[i] = v + 0.05 * gauss(rng);
  }
  return out;
}

std::vector<double> factory(std::size_t n, double fs, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni;
  std::exponential_distribution<double> gaps(6.0);  // transients per second
  std::vector<double> out(n);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = gauss(rng);
    lp = 0.9 * lp + 0.1 * w;
    out[i] = 0.5 * w + 2.0 * lp;
  }
  double t = gaps(rng);
  while (t * fs < static_cast<double>(n)) {
    const auto start = static_cast<std::size_t>(t * fs);
    Biquad ring = Biquad::bandpass(1000.0 + 3000.0 * uni(rng), 8.0, fs);
    const double amp = 3.0 + 5.0 * uni(rng);
    const auto len = std::min(n - start, static_cast<std::size_t>(0.1 * fs));
    for (std::size_t k = 0; k < len; ++k) {
      out[start + k] += amp * std::exp(-static_cast<double>(k) / (0.015 * fs)) * ring(gauss(rng));
    }
    t += gaps(rng);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string ep_mode_name(PathEnergyMode m) {
  return m == PathEnergyMode::kFullEnergy ? "full" : "direct_path";
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return stamp;
}

std::string expand_template(std::string tpl, const std::string& noise, double t60) {
  const auto replace = [&tpl](const std::string& key, const std::string& value) {
    for (auto pos = tpl.find(key); pos != std::string::npos; pos = tpl.find(key, pos + value.size())) {
      tpl.replace(pos, key.size(), value);
    }
  };
  char t60s[32];
  std::snprintf(t60s, sizeof(t60s), "%g", t60);
  replace("{noise}", noise);
  replace("{t60}", t60s);
  return tpl;
}

struct NoiseSource {
  std::string id;
  std::optional<NoiseKind> kind;
  std::filesystem::path path;
};

NoiseSource parse_noise_input(const std::string& spec) {
  constexpr std::string_view prefix = "synth:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string name = spec.substr(prefix.size());
    return {name, parse_noise_kind(name), {}};
  }
  const std::filesystem::path p(spec);
  return {p.stem().string(), std::nullopt, p};
}

}  // namespace

BoundValue nmse_db(const Waveform& e, const Waveform& d) {
  if (e.empty() || e.size() != d.size()) {
    throw ArgumentError("nmse_db: e and d must be non-empty and aligned");
  }
  const double pd = signal_power(d);
  if (!(pd > 0.0)) throw UndefinedMetricError("nmse_db: disturbance has zero power");
  const double pe = signal_power(e);
  if (pe == 0.0) return {kDbFloor, true};
  return {10.0 * std::log10(pe / pd), false};
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kBabble: return "babble";
    case NoiseKind::kEngine: return "engine";
    case NoiseKind::kFactory: return "factory";
  }
  return "white";
}

NoiseKind parse_noise_kind(const std::string& name) {
  if (name == "white") return NoiseKind::kWhite;
  if (name == "babble" || name == "babble_surrogate") return NoiseKind::kBabble;
  if (name == "engine" || name == "engine_surrogate") return NoiseKind::kEngine;
  if (name == "factory" || name == "factory_surrogate") return NoiseKind::kFactory;
  throw ConfigError("unknown noise kind '" + name + "'");
}

Waveform synth_noise(NoiseKind kind, double seconds, int sample_rate_hz, std::uint64_t seed) {
  if (!(seconds > 0.0)) throw ArgumentError("synth_noise: duration must be positive");
  if (sample_rate_hz <= 0) throw ArgumentError("synth_noise: sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate_hz));
  if (n == 0) throw ArgumentError("synth_noise: duration shorter than one sample");
  std::mt19937_64 rng(seed);
  const double fs = sample_rate_hz;
  std::vector<double> out;
  switch (kind) {
    case NoiseKind::kWhite: {
      std::normal_distribution<double> gauss;
      out.resize(n);
      for (double& v : out) v = gauss(rng);
      return Waveform(std::move(out), sample_rate_hz);
    }
    case NoiseKind::kBabble: out = babble(n, fs, rng); break;
    case NoiseKind::kEngine: out = engine(n, fs, rng); break;
    case NoiseKind::kFactory: out = factory(n, fs, rng); break;
  }
  normalize_rms(out);
  return Waveform(std::move(out), sample_rate_hz);
}

void ExperimentConfig::validate() const {
  if (t60_list.empty()) throw ConfigError("t60_list must not be empty");
  for (double t : t60_list) {
    if (!(t > 0.0)) throw ConfigError("t60_list entries must be positive");
  }
  if (noise_inputs.empty()) throw ConfigError("noise_inputs must not be empty");
  if (cancellers.empty()) throw ConfigError("cancellers must not be empty");
  for (const auto& c : cancellers) {
    if (c != "fxlms" && c != "null" && c.rfind("external:", 0) != 0) {
      throw ConfigError("unknown canceller '" + c + "'");
    }
  }
  if (!(seconds > 0.0)) throw ConfigError("seconds must be positive");
  fxlms.validate();
  kde.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = ancbound::to_json(geometry);
  j["t60_list"] = t60_list;
  j["noise_inputs"] = noise_inputs;
  j["cancellers"] = cancellers;
  j["seconds"] = seconds;
  j["seed"] = seed;
  j["fxlms"] = {{"filter_len", fxlms.filter_len},
                {"step_size", fxlms.step_size},
                {"leak", fxlms.leak},
                {"normalize", fxlms.normalize}};
  j["kde"] = {{"bin_count", kde.bin_count},
              {"bandwidth_scale", kde.bandwidth_scale},
              {"frame_len", kde.frame_len},
              {"frame_hop", kde.frame_hop}};
  j["welch"] = {{"window_len", welch.window_len}, {"overlap_frac", welch.overlap_frac}};
  j["support"] = {
      {"fft_size", support_fft_size},
      {"threshold_db", support_threshold_db},
      {"threshold_mode",
       support_threshold_mode == ThresholdMode::kRelativeToPeak ? "relative" : "absolute"},
      {"unified_variant", unified_support == SupportVariant::kWeighted ? "weighted" : "bincount"}};
  j["info_ep_mode"] = ep_mode_name(ep_mode);
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known{
      "room_dims", "ref_mic", "err_mic", "speaker", "n_taps", "sample_rate_hz", "sound_speed_mps",
      "highpass", "reverb_formula", "t60_list", "noise_inputs", "cancellers", "seconds", "seed",
      "fxlms", "kde", "welch", "support", "info_ep_mode"};
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig c;
  try {
    c.geometry = geometry_from_json(j);
    if (j.contains("t60_list")) c.t60_list = j["t60_list"].get<std::vector<double>>();
    if (j.contains("noise_inputs")) c.noise_inputs = j["noise_inputs"].get<std::vector<std::string>>();
    if (j.contains("cancellers")) c.cancellers = j["cancellers"].get<std::vector<std::string>>();
    if (j.contains("seconds")) c.seconds = j["seconds"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("fxlms")) {
      const auto& f = j["fxlms"];
      c.fxlms.filter_len = f.value("filter_len", c.fxlms.filter_len);
      c.fxlms.step_size = f.value("step_size", c.fxlms.step_size);
      c.fxlms.leak = f.value("leak", c.fxlms.leak);
      c.fxlms.normalize = f.value("normalize", c.fxlms.normalize);
    }
    if (j.contains("kde")) {
      const auto& k = j["kde"];
      c.kde.bin_count = k.value("bin_count", c.kde.bin_count);
      c.kde.bandwidth_scale = k.value("bandwidth_scale", c.kde.bandwidth_scale);
      c.kde.frame_len = k.value("frame_len", c.kde.frame_len);
      c.kde.frame_hop = k.value("frame_hop", c.kde.frame_hop);
    }
    if (j.contains("welch")) {
      const auto& w = j["welch"];
      c.welch.window_len = w.value("window_len", c.welch.window_len);
      c.welch.overlap_frac = w.value("overlap_frac", c.welch.overlap_frac);
    }
    if (j.contains("support")) {
      const auto& s = j["support"];
      c.support_fft_size = s.value("fft_size", c.support_fft_size);
      c.support_threshold_db = s.value("threshold_db", c.support_threshold_db);
      const std::string mode = s.value("threshold_mode", std::string("relative"));
      if (mode != "relative" && mode != "absolute") {
        throw ConfigError("support.threshold_mode must be 'relative' or 'absolute'");
      }
      c.support_threshold_mode =
          mode == "relative" ? ThresholdMode::kRelativeToPeak : ThresholdMode::kAbsolute;
      const std::string variant = s.value("unified_variant", std::string("weighted"));
      if (variant != "weighted" && variant != "bincount") {
        throw ConfigError("support.unified_variant must be 'weighted' or 'bincount'");
      }
      c.unified_support = variant == "weighted" ? SupportVariant::kWeighted : SupportVariant::kBinCount;
    }
    if (j.contains("info_ep_mode")) {
      const auto m = j["info_ep_mode"].get<std::string>();
      if (m == "full") {
        c.ep_mode = PathEnergyMode::kFullEnergy;
      } else if (m == "direct_path" || m == "direct") {
        c.ep_mode = PathEnergyMode::kDirectPath;
      } else {
        throw ConfigError("info_ep_mode must be 'full' or 'direct_path'");
      }
    }
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError(std::string("malformed experiment config: ") + err.what());
  }
  c.validate();
  return c;
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  nlohmann::json* node = &config;
  std::size_t start = 0;
  for (auto dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
    nlohmann::json& child = (*node)[key.substr(start, dot - start)];
    if (!child.is_object()) child = nlohmann::json::object();
    node = &child;
    start = dot + 1;
  }
  (*node)[key.substr(start)] = std::move(value);
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides) {
  nlohmann::json j = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
      throw ConfigError("config " + path.string() + " is not valid JSON: " + err.what());
    }
  }
  for (const auto& o : overrides) apply_override(j, o);
  return ExperimentConfig::from_json(j);
}

nlohmann::json BoundRow::to_json() const {
  nlohmann::json j{{"noise_id", noise_id},
                   {"t60_s", t60_s},
                   {"canceller", canceller},
                   {"seed", seed},
                   {"row_seed", row_seed},
                   {"config_hash", config_hash}};
  if (error) {
    j["error"] = *error;
    j["bound_holds"] = false;
    return j;
  }
  j["nmse_db"] = nmse_db;
  j["nmse_floored"] = nmse_floored;
  j["info_bound_lin_db"] = info_bound_lin_db;
  j["info_lin_floored"] = info_lin_floored;
  j["info_bound_lin_full_db"] = info_bound_lin_full_db;
  j["info_bound_lin_direct_db"] = info_bound_lin_direct_db;
  j["info_bound_exp_db"] = info_bound_exp_db;
  j["info_ep_mode"] = info_ep_mode;
  j["support_bound_weighted_db"] = support_bound_weighted_db;
  j["support_bound_bincount_db"] = support_bound_bincount_db;
  j["support"] = support.to_json();
  j["unified_bound_db"] = unified_bound_db;
  j["bound_holds"] = bound_holds;
  j["info"] = info.to_json();
  return j;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& noise_id, std::optional<double> t60) {
  nlohmann::json key{seed, noise_id};
  if (t60) key.push_back(format_double(*t60));
  return config_hash(key);
}

BoundRow evaluate_run(const AncRun& run, const PathPair& paths, const ExperimentConfig& config) {
  BoundRow row;
  const BoundValue nmse = nmse_db(run.e, run.d);
  row.nmse_db = nmse.db;
  row.nmse_floored = nmse.floored;

  row.info = mutual_information(run.d, run.y, config.kde);
  const BoundValue full = info_bound_db(row.info, paths.primary, InfoBoundVariant::kLinear,
                                        PathEnergyMode::kFullEnergy);
  const BoundValue direct = info_bound_db(row.info, paths.primary, InfoBoundVariant::kLinear,
                                          PathEnergyMode::kDirectPath);
  row.info_bound_lin_full_db = full.db;
  row.info_bound_lin_direct_db = direct.db;
  const BoundValue& chosen = config.ep_mode == PathEnergyMode::kFullEnergy ? full : direct;
  row.info_bound_lin_db = chosen.db;
  row.info_lin_floored = chosen.floored;
  row.info_ep_mode = ep_mode_name(config.ep_mode);
  row.info_bound_exp_db =
      info_bound_db(row.info, paths.primary, InfoBoundVariant::kExponential).db;

  const PsdEstimate x_psd = welch_psd(run.x, config.welch);
  row.support = support_bound_db(paths, x_psd, config.support_fft_size, config.support_threshold_db,
                                 config.support_threshold_mode);
  row.support_bound_weighted_db = row.support.bound_db_weighted;
  row.support_bound_bincount_db = row.support.bound_db_bincount;
  const double support_db = config.unified_support == SupportVariant::kWeighted
                                ? row.support_bound_weighted_db
                                : row.support_bound_bincount_db;
  row.unified_bound_db = unified_bound_db(row.info_bound_lin_db, support_db);
  row.bound_holds = row.nmse_db >= row.unified_bound_db;
  return row;
}

NoiseInput load_noise_input(const std::string& input, const ExperimentConfig& config) {
  const NoiseSource src = parse_noise_input(input);
  const int fs = config.geometry.sample_rate_hz;
  if (src.kind) {
    return {src.id, synth_noise(*src.kind, config.seconds, fs, derive_seed(config.seed, src.id))};
  }
  const auto len = static_cast<std::size_t>(std::llround(fs * config.seconds));
  return {src.id, standardize_to_length(read_wav(src.path).channel0, fs, len)};
}

Canceller make_canceller(const std::string& name, const std::string& noise_id, double t60_s,
                         const ExperimentConfig& config, std::size_t expected_len) {
  if (name == "null") return NullCanceller{};
  if (name == "fxlms") return FxlmsCanceller{config.fxlms};
  if (name.rfind("external:", 0) == 0) {
    const std::string file = expand_template(name.substr(9), noise_id, t60_s);
    return ExternalCanceller{
        ingest_external_y(file, config.geometry.sample_rate_hz, expected_len).y, file};
  }
  throw ConfigError("unknown canceller '" + name + "'");
}

std::vector<BoundRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::string hash = hash_hex(config_hash(config.to_json()));

  std::vector<PathPair> paths;
  paths.reserve(config.t60_list.size());
  for (double t60 : config.t60_list) paths.push_back(simulate_paths(config.geometry, t60));

  std::vector<BoundRow> rows;
  for (const auto& input : config.noise_inputs) {
    const std::string id = parse_noise_input(input).id;
    std::optional<Waveform> x;
    std::string load_error;
    try {
      x = load_noise_input(input, config).x;
    } catch (const std::exception& err) {
      load_error = err.what();
    }

    for (std::size_t ti = 0; ti < config.t60_list.size(); ++ti) {
      const double t60 = config.t60_list[ti];
      for (const auto& cname : config.cancellers) {
        BoundRow row;
        try {
          if (!x) throw IoError(load_error);
          const Canceller canceller = make_canceller(cname, id, t60, config, x->size());
          row = evaluate_run(run_pipeline(*x, paths[ti], canceller), paths[ti], config);
        } catch (const InfeasibleConfigError&) {
          throw;
        } catch (const std::exception& err) {
          row = BoundRow{};
          row.error = err.what();
          row.nmse_db = row.info_bound_lin_db = row.info_bound_exp_db = kNaN;
          row.info_bound_lin_full_db = row.info_bound_lin_direct_db = kNaN;
          row.support_bound_weighted_db = row.support_bound_bincount_db = kNaN;
          row.unified_bound_db = kNaN;
          row.info_ep_mode = ep_mode_name(config.ep_mode);
        }
        row.noise_id = id;
        row.t60_s = t60;
        row.canceller = cname.rfind("external:", 0) == 0 ? "external" : cname;
        row.seed = config.seed;
        row.row_seed = derive_seed(config.seed, id, t60);
        row.config_hash = hash;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string report_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream out;
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.noise_id) << ',' << format_double(r.t60_s) << ',' << csv_field(r.canceller)
        << ',' << format_double(r.nmse_db) << ',' << format_double(r.info_bound_lin_db) << ','
        << format_double(r.info_bound_exp_db) << ',' << r.info_ep_mode << ','
        << format_double(r.support_bound_weighted_db) << ','
        << format_double(r.support_bound_bincount_db) << ',' << format_double(r.unified_bound_db)
        << ',' << (r.bound_holds ? "true" : "false") << ',' << r.seed << ',' << r.config_hash
        << '\n';
  }
  return out.str();
}

nlohmann::json report_json(const std::vector<BoundRow>& rows, const nlohmann::json& config) {
  nlohmann::json out;
  out["manifest"] = {{"config", config},
                     {"config_hash", hash_hex(config_hash(config))},
                     {"seed", config.value("seed", 0)},
                     {"created_utc", utc_now()}};
  out["rows"] = nlohmann::json::array();
  for (const auto& r : rows) out["rows"].push_back(r.to_json());
  return out;
}

void write_report(const std::filesystem::path& path, const std::vector<BoundRow>& rows,
                  ReportFormat format, const nlohmann::json& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path.string());
  if (format == ReportFormat::kCsv) {
    out << report_csv(rows);
  } else {
    out << report_json(rows, config).dump(2) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<BoundRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("report CSV is empty");
  const auto header = split_csv_line(line);
  if (header != report_columns()) throw IoError("report CSV has unexpected columns: " + line);
  const auto number = [](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw IoError("bad number '" + s + "' in report CSV");
    return v;
  };
  std::vector<BoundRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw IoError("report CSV row has wrong field count: " + line);
    BoundRow r;
    r.noise_id = f[0];
    r.t60_s = number(f[1]);
    r.canceller = f[2];
    r.nmse_db = number(f[3]);
    r.info_bound_lin_db = number(f[4]);
    r.info_bound_exp_db = number(f[5]);
    r.info_ep_mode = f[6];
    r.support_bound_weighted_db = number(f[7]);
    r.support_bound_bincount_db = number(f[8]);
    r.unified_bound_db = number(f[9]);
    if (f[10] != "true" && f[10] != "false") throw IoError("bound_holds must be true/false");
    r.bound_holds = f[10] == "true";
    r.seed = std::stoull(f[11]);
    r.config_hash = f[12];
    if (std::isnan(r.nmse_db)) r.error = "error row";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<BoundRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_report_csv(buf.str());
}

}  // namespace ancbound
