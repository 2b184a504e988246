#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "wpd/detector.hpp"
#include "wpd/fock.hpp"

namespace wpd {

struct ParticleSetting {
  int x = 0;
  int y = 0;
  double weight = 1.0;
};

struct WaveSetting {
  Complex x;
  Complex y;
  double weight = 1.0;
};

/// Classical particle input: finite mixture over integer photon pairs (X, Y).
struct ParticleEnsemble {
  std::vector<ParticleSetting> settings;
};

/// Classical wave input: either a finite mixture over complex amplitude pairs
/// or a thermal Gaussian amplitude ensemble with mean photon number nbar per
/// mode.
struct ThermalAmplitudes {
  double nbar = 0.0;
};

struct WaveEnsemble {
  std::variant<std::vector<WaveSetting>, ThermalAmplitudes> input;
};

struct RunConfig {
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;
  double eta = 1.0;
  double theta = 0.0;
  int d_bins = kDefaultBins;
  unsigned threads = 1;
  double tau = 1e-10;  // tail-mass guard for quantum sampling
};

/// Simulated experiment: draw photon pairs from the (post-loss) joint
/// distribution, throw each photon into a uniform time bin per mode, and
/// histogram the click pairs.  Deterministic for a fixed seed, independent of
/// the thread count.
JointHistogram sample_quantum_shots(const JointNumberDistribution& dist,
                                    const RunConfig& cfg);

/// Classical particle reference: thin each input photon by eta, route each
/// survivor to the top or right detector with probability 1/2, and histogram
/// the raw counts (M, N).
JointHistogram sample_classical_particles(const ParticleEnsemble& ens,
                                          const RunConfig& cfg);

/// Classical wave reference: mix the amplitudes on the beam splitter,
/// then draw independent Poisson counts with means eta |X'|^2 and eta |Y'|^2.
JointHistogram sample_classical_waves(const WaveEnsemble& ens,
                                      const RunConfig& cfg);

}  // namespace wpd
