#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <variant>

#include "wpd/fock.hpp"
#include "wpd/samplers.hpp"

namespace wpd {

struct ConfigError : InvalidParameter {
  using InvalidParameter::InvalidParameter;
};

/// Quantum input: two mode preparations mixed on the beam splitter.
struct QuantumInput {
  ModePreparation a = Vacuum{};
  ModePreparation b = Vacuum{};
};

struct SimulationConfig {
  std::variant<QuantumInput, ParticleEnsemble, WaveEnsemble> input;
  double theta = 0.0;
  double eta = 1.0;
  int d_bins = kDefaultBins;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double tau = 1e-10;
  int n_max = 0;  // 0 selects the cutoff automatically
  std::string echo;  // compact JSON of the parsed config
};

/// Parse and schema-validate a config document; unknown keys are rejected.
SimulationConfig parse_config(const nlohmann::json& doc);
SimulationConfig parse_config_file(const std::string& path);

/// The quantum pipeline behind `simulate`: prepare, mix, attenuate.
JointNumberDistribution quantum_pipeline(const QuantumInput& input,
                                         double theta, double eta, int n_max,
                                         double tau);

/// Cutoff heuristic for the full pipeline (covers post-beam-splitter
/// redistribution of the per-mode preparations).
int pipeline_cutoff(const QuantumInput& input, double tau);

/// Run the configured experiment and return the histogram (config echoed
/// into the histogram for reproducible re-analysis).
JointHistogram run_simulation(const SimulationConfig& cfg);

/// Convenience: squeezed-pair preparation that interferes to a two-mode
/// squeezed vacuum with parameter q = tanh^2 r at theta = 0.
QuantumInput tmsv_input(double q);

}  // namespace wpd
