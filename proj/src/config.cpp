#include "wpd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>

namespace wpd {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw ConfigError(std::string(key) + " must be a number");
  }
  return obj[key].get<double>();
}

ModePreparation parse_mode(const json& obj, const char* where) {
  if (!obj.is_object() || !obj.contains("kind")) {
    throw ConfigError(std::string(where) + " must be an object with a kind");
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "vacuum") {
    reject_unknown(obj, where, {"kind"});
    return Vacuum{};
  }
  if (kind == "coherent") {
    reject_unknown(obj, where, {"kind", "alpha_re", "alpha_im"});
    return Coherent{{number(obj, "alpha_re", 0.0), number(obj, "alpha_im", 0.0)}};
  }
  if (kind == "fock") {
    reject_unknown(obj, where, {"kind", "n"});
    if (!obj.contains("n")) throw ConfigError("fock mode needs n");
    return FockN{obj["n"].get<int>()};
  }
  if (kind == "squeezed") {
    reject_unknown(obj, where, {"kind", "r", "phi"});
    if (!obj.contains("r")) throw ConfigError("squeezed mode needs r");
    return Squeezed{number(obj, "r", 0.0), number(obj, "phi", 0.0)};
  }
  throw ConfigError("unknown mode kind: " + kind);
}

std::variant<QuantumInput, ParticleEnsemble, WaveEnsemble> parse_input(
    const json& obj) {
  if (!obj.is_object() || !obj.contains("kind")) {
    throw ConfigError("input must be an object with a kind");
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "tmsv") {
    reject_unknown(obj, "input", {"kind", "q"});
    if (!obj.contains("q")) throw ConfigError("tmsv input needs q");
    const double q = obj["q"].get<double>();
    if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0, 1)");
    return tmsv_input(q);
  }
  if (kind == "two_mode") {
    reject_unknown(obj, "input", {"kind", "a", "b"});
    QuantumInput in;
    if (obj.contains("a")) in.a = parse_mode(obj["a"], "input.a");
    if (obj.contains("b")) in.b = parse_mode(obj["b"], "input.b");
    return in;
  }
  if (kind == "classical_particles") {
    reject_unknown(obj, "input", {"kind", "settings"});
    ParticleEnsemble ens;
    for (const auto& s : obj.at("settings")) {
      reject_unknown(s, "particle setting", {"x", "y", "weight"});
      ens.settings.push_back(
          {s.at("x").get<int>(), s.at("y").get<int>(), number(s, "weight", 1.0)});
    }
    return ens;
  }
  if (kind == "classical_waves") {
    reject_unknown(obj, "input", {"kind", "settings", "thermal_nbar"});
    WaveEnsemble ens;
    if (obj.contains("thermal_nbar")) {
      if (obj.contains("settings")) {
        throw ConfigError("give either settings or thermal_nbar, not both");
      }
      ens.input = ThermalAmplitudes{obj["thermal_nbar"].get<double>()};
      return ens;
    }
    std::vector<WaveSetting> settings;
    for (const auto& s : obj.at("settings")) {
      reject_unknown(s, "wave setting",
                     {"x_re", "x_im", "y_re", "y_im", "weight"});
      settings.push_back({{number(s, "x_re", 0.0), number(s, "x_im", 0.0)},
                          {number(s, "y_re", 0.0), number(s, "y_im", 0.0)},
                          number(s, "weight", 1.0)});
    }
    ens.input = std::move(settings);
    return ens;
  }
  throw ConfigError("unknown input kind: " + kind);
}

}  // namespace

QuantumInput tmsv_input(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidParameter("q must lie in (0, 1)");
  const double r = std::atanh(std::sqrt(q));
  // Opposite squeezing phases; this convention interferes to a TMSV at
  // theta = 0.
  return {Squeezed{r, 0.0}, Squeezed{r, std::numbers::pi}};
}

SimulationConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  reject_unknown(doc, "config",
                 {"input", "interferometer", "loss", "detector", "run",
                  "analysis"});
  if (!doc.contains("input")) throw ConfigError("config needs an input section");
  if (!doc.contains("run")) throw ConfigError("config needs a run section");

  SimulationConfig cfg;
  cfg.input = parse_input(doc["input"]);

  if (doc.contains("interferometer")) {
    reject_unknown(doc["interferometer"], "interferometer", {"theta"});
    cfg.theta = number(doc["interferometer"], "theta", 0.0);
  }
  if (doc.contains("loss")) {
    reject_unknown(doc["loss"], "loss", {"eta"});
    cfg.eta = number(doc["loss"], "eta", 1.0);
    if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) {
      throw ConfigError("eta must lie in [0, 1]");
    }
  }
  if (doc.contains("detector")) {
    reject_unknown(doc["detector"], "detector", {"d_bins"});
    cfg.d_bins = int(number(doc["detector"], "d_bins", kDefaultBins));
    if (cfg.d_bins < 1 || cfg.d_bins > 64) {
      throw ConfigError("d_bins must lie in [1, 64]");
    }
  }
  {
    const json& run = doc["run"];
    reject_unknown(run, "run", {"shots", "seed", "threads"});
    if (!run.contains("shots")) throw ConfigError("run needs shots");
    const auto shots = run["shots"].get<std::int64_t>();
    if (shots < 1) throw ConfigError("shots must be >= 1");
    cfg.shots = std::uint64_t(shots);
    cfg.seed = run.contains("seed") ? run["seed"].get<std::uint64_t>() : 0;
    cfg.threads = run.contains("threads") ? run["threads"].get<unsigned>() : 1;
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  }
  if (doc.contains("analysis")) {
    reject_unknown(doc["analysis"], "analysis", {"tau", "n_max"});
    cfg.tau = number(doc["analysis"], "tau", 1e-10);
    if (!(cfg.tau > 0.0)) throw ConfigError("tau must be > 0");
    cfg.n_max = int(number(doc["analysis"], "n_max", 0.0));
    if (cfg.n_max < 0) throw ConfigError("n_max must be >= 0");
  }
  // The echo identifies the experiment, so execution details like the thread
  // count are stripped: runs differing only in parallelism produce identical
  // histogram files.
  json echo = doc;
  if (echo["run"].contains("threads")) echo["run"].erase("threads");
  cfg.echo = echo.dump();
  return cfg;
}

SimulationConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  json doc;
  try {
    is >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(doc);
}

int pipeline_cutoff(const QuantumInput& input, double tau) {
  // The beam splitter can concentrate both inputs into one arm, so size the
  // per-mode cutoff for the combined intensity.  Doubling the single-mode
  // cutoffs at a tightened tolerance covers that and leaves headroom for the
  // loss map (which only shrinks the distribution).
  // Floor at the resolution of the accumulated norm: below ~1e-12 the running
  // tail is rounding noise and the cutoff search could never terminate.
  const double per_mode_tau = std::max(tau * 1e-3, 1e-12);
  const int ca = auto_cutoff(input.a, per_mode_tau);
  const int cb = auto_cutoff(input.b, per_mode_tau);
  return std::max(2 * std::max(ca, cb) + 8, 8);
}

JointNumberDistribution quantum_pipeline(const QuantumInput& input,
                                         double theta, double eta, int n_max,
                                         double tau) {
  const TwoModeState prepared = prepare_two_mode(input.a, input.b, n_max, tau);
  const TwoModeState mixed = apply_beam_splitter(prepared, theta);
  return apply_loss(number_distribution(mixed), eta, eta);
}

JointHistogram run_simulation(const SimulationConfig& cfg) {
  RunConfig run;
  run.shots = cfg.shots;
  run.seed = cfg.seed;
  run.eta = cfg.eta;
  run.theta = cfg.theta;
  run.d_bins = cfg.d_bins;
  run.threads = cfg.threads;
  run.tau = cfg.tau;

  JointHistogram h;
  if (const auto* q = std::get_if<QuantumInput>(&cfg.input)) {
    const int n_max = cfg.n_max > 0 ? cfg.n_max : pipeline_cutoff(*q, cfg.tau);
    const JointNumberDistribution dist =
        quantum_pipeline(*q, cfg.theta, cfg.eta, n_max, cfg.tau);
    h = sample_quantum_shots(dist, run);
  } else if (const auto* p = std::get_if<ParticleEnsemble>(&cfg.input)) {
    h = sample_classical_particles(*p, run);
  } else {
    h = sample_classical_waves(std::get<WaveEnsemble>(cfg.input), run);
  }
  h.config_echo = cfg.echo;
  return h;
}

}  // namespace wpd
