// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails.  Kept separate from the unit tests because several checks
// are long-running Monte Carlo batteries.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wpd/analysis.hpp"
#include "wpd/config.hpp"
#include "wpd/io.hpp"
#include "wpd/samplers.hpp"
#include "wpd/witness.hpp"

using namespace wpd;
using std::numbers::pi;

namespace {

int g_failures = 0;

struct Criterion {
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }

  ~Criterion() {
    std::printf("[%s] %s\n", pass ? "PASS" : "FAIL", name.c_str());
    for (const auto& n : notes) std::printf("       %s\n", n.c_str());
    if (!pass) ++g_failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

WitnessResult pipeline_witness(const QuantumInput& input, double theta,
                               double eta) {
  const int n_max = pipeline_cutoff(input, 1e-12);
  return witness_pair(
      photon_moments(quantum_pipeline(input, theta, eta, n_max, 1e-12)));
}

AnalysisReport tmsv_run(double mean_total, double eta, std::uint64_t shots,
                        std::uint64_t seed) {
  SimulationConfig cfg;
  const double q = mean_total / (mean_total + 2.0 * eta);
  cfg.input = tmsv_input(q);
  cfg.eta = eta;
  cfg.shots = shots;
  cfg.seed = seed;
  cfg.threads = 8;
  return analyze(run_simulation(cfg));
}

void criterion_closed_form() {
  Criterion c{"1 closed-form equivalence (squeezed pair pipeline)"};
  const auto t0 = std::chrono::steady_clock::now();
  for (double q : {0.1, 0.3, 0.5, 0.7}) {
    for (double eta : {0.024, 0.5, 1.0}) {
      const WitnessResult w = pipeline_witness(tmsv_input(q), 0.0, eta);
      const double expected = -eta * eta * q / (1.0 - q);
      char buf[160];
      std::snprintf(buf, sizeof(buf), "q=%.1f eta=%.3f: e=(%.12g, %.12g) vs %.12g",
                    q, eta, w.e_wave, w.e_part, expected);
      c.require(std::abs(w.e_wave - expected) < 1e-9 &&
                    std::abs(w.e_part - expected) < 1e-9,
                buf);
    }
  }
  const double dt = seconds_since(t0);
  c.require(dt < 10.0, "runtime " + std::to_string(dt) + " s exceeds 10 s");
}

void criterion_sweeps() {
  Criterion c{"2 coherent / photon-pair / vacuum sweeps"};
  // coherent sweep over amplitude and phase
  for (double amp : {0.25, 0.5, 1.0, 1.5}) {
    for (double theta : {0.0, 0.3, pi / 2.0, 2.0}) {
      const WitnessResult w =
          pipeline_witness({Coherent{amp}, Coherent{amp}}, theta, 1.0);
      const AnalyticResult ref = analytic_coherent(amp, amp, theta, 1.0);
      c.require(std::abs(w.e_wave) < 1e-12, "coherent e_wave not zero");
      c.require(std::abs(w.e_part - ref.e_part) < 1e-9,
                "coherent e_part off closed form");
    }
  }
  // spot value
  const WitnessResult spot = pipeline_witness({Coherent{1.0}, Coherent{1.0}}, 0.0, 1.0);
  c.require(std::abs(spot.e_part - 0.5 * (1.0 - std::sqrt(5.0))) < 1e-9,
            "spot value (1-sqrt(5))/2 missed");
  // photon-number sweep
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) {
      if (m == 0 && n == 0) continue;
      const WitnessResult w = pipeline_witness({FockN{m}, FockN{n}}, 0.0, 1.0);
      c.require(std::abs(w.e_wave + 0.5 * (m + n)) < 1e-9,
                "photon pair e_wave != -(m+n)/2");
      c.require(w.e_part > -1e-9, "photon pair e_part negative");
    }
  }
  // vacuum
  const WitnessResult vac = pipeline_witness({Vacuum{}, Vacuum{}}, 0.0, 1.0);
  c.require(vac.e_wave == 0.0 && vac.e_part == 0.0, "vacuum not exactly (0,0)");
}

void criterion_hom() {
  Criterion c{"3 two-photon interference"};
  const TwoModeState out =
      apply_beam_splitter(prepare_two_mode(FockN{1}, FockN{1}, 12, 1e-12), 0.0);
  const JointNumberDistribution dist = number_distribution(out);
  c.require(dist.probs(1, 1) < 1e-12, "coincidence probability not suppressed");
  const WitnessResult w = witness_pair(photon_moments(dist));
  c.require(std::abs(w.e_wave + 1.0) < 1e-9, "e_wave != -1");
}

void criterion_monte_carlo() {
  Criterion c{"4 Monte Carlo squeezed-vacuum runs at low efficiency"};
  const auto t0 = std::chrono::steady_clock::now();
  const double eta = 0.024;
  for (double total : {0.005, 0.02, 0.05}) {
    const AnalysisReport rep = tmsv_run(total, eta, 10000000, 20260800);
    const double expected = -(eta / 2.0) * total;
    const auto& w = rep.witness;
    const double sig_wave = w.err_wave_random + w.err_wave_sys;
    const double sig_part = w.err_part_random + w.err_part_sys;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "total=%.3f: e_wave=%.3e±%.1e e_part=%.3e±%.1e expect %.3e",
                  total, w.e_wave, sig_wave, w.e_part, sig_part, expected);
    c.require(std::abs(w.e_wave - expected) < 3.0 * sig_wave, buf);
    c.require(std::abs(w.e_part - expected) < 3.0 * sig_part, buf);
    if (total == 0.05) {
      c.require(w.significance_wave >= 3.0 && w.significance_part >= 3.0,
                "significance below 3 sigma at the largest point");
    }
    if (total == 0.02) {
      // CLT scaling: the statistical significance |e| / sigma_random grows as
      // sqrt(shots).  The numerator is common to all shot counts, so the
      // scaling is carried entirely by the random errors; comparing those
      // directly avoids the (large) fluctuation of the 1e5-shot point
      // estimate.  The systematic bound is shot-independent by construction
      // and excluded.
      const double r5 = tmsv_run(total, eta, 100000, 41).witness.err_wave_random;
      const double r6 = tmsv_run(total, eta, 1000000, 42).witness.err_wave_random;
      const double r7 = w.err_wave_random;
      const double r65 = r5 / r6;
      const double r76 = r6 / r7;
      const double sqrt10 = std::sqrt(10.0);
      std::snprintf(buf, sizeof(buf), "scaling ratios %.2f, %.2f vs sqrt(10)=%.2f",
                    r65, r76, sqrt10);
      c.require(std::abs(r65 / sqrt10 - 1.0) < 0.30 &&
                    std::abs(r76 / sqrt10 - 1.0) < 0.30,
                buf);
    }
  }
  const double dt = seconds_since(t0);
  c.require(dt < 300.0, "runtime " + std::to_string(dt) + " s exceeds 5 min");
}

void criterion_classical_oracles() {
  Criterion c{"5 classical reference models stay classical"};
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);

  RunConfig run;
  run.shots = 1000000;
  run.threads = 8;

  for (int trial = 0; trial < 20; ++trial) {
    ParticleEnsemble ens;
    const int n_settings = 1 + int(rng() % 3);
    for (int s = 0; s < n_settings; ++s) {
      ens.settings.push_back({int(rng() % 4), int(rng() % 4), u01(rng) + 0.05});
    }
    run.seed = 9000 + std::uint64_t(trial);
    run.eta = 0.2 + 0.8 * u01(rng);
    const AnalysisReport rep = analyze(sample_classical_particles(ens, run));
    const auto& w = rep.witness;
    const double sigma = w.err_part_random + w.err_part_sys;
    if (w.e_part < -3.0 * sigma) {
      char buf[120];
      std::snprintf(buf, sizeof(buf), "particle trial %d: e_part=%.3e sigma=%.3e",
                    trial, w.e_part, sigma);
      c.require(false, buf);
    }
  }

  auto check_wave = [&](const WaveEnsemble& ens, std::uint64_t seed,
                        const std::string& label, bool check_part) {
    run.seed = seed;
    run.eta = 0.2 + 0.8 * u01(rng);
    run.theta = pi * amp(rng);
    const AnalysisReport rep = analyze(sample_classical_waves(ens, run));
    const auto& w = rep.witness;
    const double sw = w.err_wave_random + w.err_wave_sys;
    if (w.e_wave < -3.0 * sw) {
      c.require(false, label + ": e_wave below -3 sigma");
    }
    if (check_part) {
      const double sp = w.err_part_random + w.err_part_sys;
      if (w.e_part < -3.0 * sp) {
        c.require(false, label + ": e_part below -3 sigma");
      }
    }
  };

  for (int trial = 0; trial < 17; ++trial) {
    WaveEnsemble ens;
    std::vector<WaveSetting> settings;
    const int n_settings = 1 + int(rng() % 3);
    for (int s = 0; s < n_settings; ++s) {
      settings.push_back({Complex{amp(rng), amp(rng)},
                          Complex{amp(rng), amp(rng)}, u01(rng) + 0.05});
    }
    ens.input = std::move(settings);
    check_wave(ens, 7000 + std::uint64_t(trial),
               "wave trial " + std::to_string(trial), false);
  }
  int thermal_index = 0;
  for (double nbar : {0.05, 0.1, 0.5}) {
    WaveEnsemble ens;
    ens.input = ThermalAmplitudes{nbar};
    check_wave(ens, 7700 + std::uint64_t(thermal_index++),
               "thermal nbar=" + std::to_string(nbar), true);
  }
}

void criterion_detector_identities() {
  Criterion c{"6 detector model identities"};
  const int d = 8;
  for (double mu : {0.05, 0.2, 0.5, 1.0}) {
    const TwoModeState st =
        prepare_two_mode(Coherent{std::sqrt(mu)}, Vacuum{}, 40, 1e-13);
    const ClickDistribution clicks =
        click_distribution(number_distribution(st), d, 1e-10);
    for (int m = 1; m <= 4; ++m) {
      const double expected = std::pow(1.0 - std::exp(-mu / d), m);
      c.require(std::abs(factorial_moment(clicks, m, 0).value - expected) <
                    1e-12,
                "coherent factorial moment identity failed");
    }
  }

  // reconstruction bias bounded by the systematic estimate
  std::vector<JointNumberDistribution> fixtures;
  fixtures.push_back(number_distribution(
      prepare_two_mode(Coherent{0.4}, Coherent{0.3}, 30, 1e-13)));
  fixtures.push_back(apply_loss(
      number_distribution(apply_beam_splitter(
          prepare_two_mode(FockN{1}, FockN{1}, 20, 1e-13), 0.0)),
      0.2, 0.2));
  fixtures.push_back(quantum_pipeline(tmsv_input(0.15), 0.0, 0.8,
                                      pipeline_cutoff(tmsv_input(0.15), 1e-13),
                                      1e-13));
  for (const auto& dist : fixtures) {
    const MomentSet exact = photon_moments(dist);
    if (exact.mean_total() > 0.5) {
      c.require(false, "fixture exceeds the intended intensity range");
      continue;
    }
    const MomentSet est = moments_from_clicks(
        click_moments(click_distribution(dist, d, 1e-9)), d);
    const Eigen::Matrix<double, 5, 1> sys = *est.sys_err;
    const double bias[5] = {
        est.mean_a - exact.mean_a, est.mean_b - exact.mean_b,
        est.mean_a2 - exact.mean_a2, est.mean_b2 - exact.mean_b2,
        est.mean_ab - exact.mean_ab};
    for (int i = 0; i < 5; ++i) {
      c.require(std::abs(bias[i]) <= sys(i) + 1e-12,
                "reconstruction bias exceeds the systematic bound");
    }
  }

  for (int n = 0; n <= 60; ++n) {
    c.require(std::abs(occupancy_kernel(n, d).sum() - 1.0) < 1e-14,
              "occupancy kernel row sum off at n=" + std::to_string(n));
  }
}

void criterion_error_calibration() {
  Criterion c{"7 propagated errors match the empirical spread"};
  const double q = 0.05, eta = 0.5;
  const std::uint64_t shots = 20000;
  const int seeds = 200;
  std::vector<double> values;
  values.reserve(seeds);
  double predicted = 0.0;
  for (int s = 0; s < seeds; ++s) {
    SimulationConfig cfg;
    cfg.input = tmsv_input(q);
    cfg.eta = eta;
    cfg.shots = shots;
    cfg.seed = 50000 + std::uint64_t(s);
    cfg.threads = 8;
    const AnalysisReport rep = analyze(run_simulation(cfg));
    values.push_back(rep.witness.e_wave);
    predicted += rep.witness.err_wave_random;
  }
  predicted /= double(seeds);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(seeds);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double empirical = std::sqrt(var / double(seeds - 1));
  char buf[120];
  std::snprintf(buf, sizeof(buf), "predicted sigma %.4e, empirical %.4e",
                predicted, empirical);
  c.require(std::abs(predicted / empirical - 1.0) < 0.25, buf);
}

void criterion_determinism() {
  Criterion c{"8 byte-identical round trips"};
  SimulationConfig cfg;
  cfg.input = tmsv_input(0.2);
  cfg.eta = 0.6;
  cfg.shots = 100000;
  cfg.seed = 2024;

  cfg.threads = 1;
  std::ostringstream serial;
  write_histogram(serial, run_simulation(cfg));
  cfg.threads = 8;
  std::ostringstream parallel;
  write_histogram(parallel, run_simulation(cfg));
  c.require(serial.str() == parallel.str(),
            "histogram differs across thread counts");

  std::istringstream in(serial.str());
  const JointHistogram back = read_histogram(in);
  std::ostringstream rewritten;
  write_histogram(rewritten, back);
  c.require(rewritten.str() == serial.str(), "file round trip not byte-exact");

  std::ostringstream report_a, report_b;
  write_report(report_a, analyze(back));
  write_report(report_b, analyze(run_simulation(cfg)));
  c.require(report_a.str() == report_b.str(),
            "analysis reports differ after a round trip");
}

}  // namespace

int main() {
  criterion_closed_form();
  criterion_sweeps();
  criterion_hom();
  criterion_monte_carlo();
  criterion_classical_oracles();
  criterion_detector_identities();
  criterion_error_calibration();
  criterion_determinism();
  if (g_failures != 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
