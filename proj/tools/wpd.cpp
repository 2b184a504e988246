#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "wpd/analysis.hpp"
#include "wpd/config.hpp"
#include "wpd/io.hpp"
#include "wpd/witness.hpp"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;

/// Relative output paths land in $WPD_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path == "-") return path;
  const char* dir = std::getenv("WPD_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

struct TheoryOptions {
  std::string state = "tmsv";
  double q = 0.5;
  double eta = 1.0;
  double theta = 0.0;
  double alpha_re = 0.0, alpha_im = 0.0;
  double beta_re = 0.0, beta_im = 0.0;
  int m = 0, n = 0;
  std::string via = "analytic";
  int n_max = 0;
  double tau = 1e-10;
};

wpd::AnalyticResult theory_analytic(const TheoryOptions& opt) {
  if (opt.state == "tmsv") return wpd::analytic_tmsv(opt.q, opt.eta);
  if (opt.state == "coherent") {
    return wpd::analytic_coherent({opt.alpha_re, opt.alpha_im},
                                  {opt.beta_re, opt.beta_im}, opt.theta,
                                  opt.eta);
  }
  if (opt.state == "fock") return wpd::analytic_fock(opt.m, opt.n, opt.eta);
  if (opt.state == "vacuum") return {0.0, 0.0, 0.0};
  throw wpd::InvalidParameter("unknown state family: " + opt.state);
}

wpd::AnalyticResult theory_pipeline(const TheoryOptions& opt) {
  wpd::QuantumInput input;
  double theta = opt.theta;
  if (opt.state == "tmsv") {
    input = wpd::tmsv_input(opt.q);
    theta = 0.0;
  } else if (opt.state == "coherent") {
    input = {wpd::Coherent{{opt.alpha_re, opt.alpha_im}},
             wpd::Coherent{{opt.beta_re, opt.beta_im}}};
  } else if (opt.state == "fock") {
    input = {wpd::FockN{opt.m}, wpd::FockN{opt.n}};
  } else if (opt.state == "vacuum") {
    input = {wpd::Vacuum{}, wpd::Vacuum{}};
  } else {
    throw wpd::InvalidParameter("unknown state family: " + opt.state);
  }
  const int n_max =
      opt.n_max > 0 ? opt.n_max : wpd::pipeline_cutoff(input, opt.tau);
  const wpd::JointNumberDistribution dist =
      wpd::quantum_pipeline(input, theta, opt.eta, n_max, opt.tau);
  const wpd::MomentSet moments = wpd::photon_moments(dist);
  const wpd::WitnessResult w = wpd::witness_pair(moments);
  return {w.e_wave, w.e_part, moments.mean_total()};
}

void emit_theory(const wpd::AnalyticResult& r) {
  nlohmann::json j{{"e_wave", r.e_wave},
                   {"e_part", r.e_part},
                   {"mean_total", r.mean_total}};
  std::cout << j.dump(2) << "\n";
}

struct SweepOptions {
  std::string family = "tmsv";
  double min = 0.0, max = 1.0;
  int steps = 11;
  double eta = 1.0;
  std::string out;
};

void run_sweep(const SweepOptions& opt) {
  if (opt.steps < 1) throw wpd::InvalidParameter("steps must be >= 1");
  if (!(opt.max >= opt.min)) {
    throw wpd::InvalidParameter("sweep range must satisfy max >= min");
  }
  std::ostringstream body;
  body.precision(17);
  auto emit = [&](double param, const wpd::AnalyticResult& r) {
    body << param << "," << r.e_wave << "," << r.e_part << "," << r.mean_total
         << "\n";
  };
  if (opt.family == "coherent") {
    // alpha = beta real, theta = 0
    for (int i = 0; i < opt.steps; ++i) {
      const double a = opt.steps == 1
                           ? opt.min
                           : opt.min + (opt.max - opt.min) * i / (opt.steps - 1);
      emit(a, wpd::analytic_coherent(a, a, 0.0, opt.eta));
    }
  } else if (opt.family == "fock") {
    // m = n over the integer range
    for (int n = int(opt.min); n <= int(opt.max); ++n) {
      emit(double(n), wpd::analytic_fock(n, n, opt.eta));
    }
  } else if (opt.family == "tmsv") {
    // grid over the lossy mean total photon number at fixed eta
    for (int i = 0; i < opt.steps; ++i) {
      const double total = opt.steps == 1
                               ? opt.min
                               : opt.min + (opt.max - opt.min) * i / (opt.steps - 1);
      if (!(total > 0.0)) {
        throw wpd::InvalidParameter("tmsv sweep needs mean_total > 0");
      }
      const double q = total / (total + 2.0 * opt.eta);
      emit(total, wpd::analytic_tmsv(q, opt.eta));
    }
  } else {
    throw wpd::InvalidParameter("unknown sweep family: " + opt.family);
  }

  std::ostringstream full;
  full << "# format=" << wpd::kSweepFormat << "\n";
  full << "# family=" << opt.family << "\n";
  full << "# eta=" << opt.eta << "\n";
  full << "parameter,e_wave,e_part,mean_total\n";
  full << body.str();
  if (opt.out.empty() || opt.out == "-") {
    std::cout << full.str();
  } else {
    std::ofstream os(resolve_out(opt.out));
    if (!os) throw wpd::IoError("cannot open " + opt.out);
    os << full.str();
    if (!os) throw wpd::IoError("failed writing " + opt.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave/particle nonclassicality witness toolkit"};
  app.require_subcommand(1);

  TheoryOptions theory;
  auto* cmd_theory =
      app.add_subcommand("theory", "Closed-form witness values for a state");
  cmd_theory->add_option("--state", theory.state,
                         "State family: tmsv, coherent, fock, vacuum");
  cmd_theory->add_option("--q", theory.q, "TMSV parameter q = tanh^2 r");
  cmd_theory->add_option("--eta", theory.eta, "Quantum efficiency");
  cmd_theory->add_option("--theta", theory.theta, "Beam-splitter phase");
  cmd_theory->add_option("--alpha", theory.alpha_re, "Re(alpha)");
  cmd_theory->add_option("--alpha-im", theory.alpha_im, "Im(alpha)");
  cmd_theory->add_option("--beta", theory.beta_re, "Re(beta)");
  cmd_theory->add_option("--beta-im", theory.beta_im, "Im(beta)");
  cmd_theory->add_option("--m", theory.m, "Photons in mode A");
  cmd_theory->add_option("--n", theory.n, "Photons in mode B");
  cmd_theory->add_option("--via", theory.via,
                         "Evaluation route: analytic or pipeline");
  cmd_theory->add_option("--n-max", theory.n_max,
                         "Fock cutoff for the pipeline route (0 = auto)");
  cmd_theory->add_option("--tau", theory.tau, "Truncation tolerance");

  std::string config_path, out_path;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Run a simulated experiment");
  cmd_simulate->add_option("--config", config_path, "Config JSON file")
      ->required();
  cmd_simulate->add_option("--out", out_path, "Histogram output file")
      ->required();

  std::string hist_path, report_path;
  auto* cmd_analyze =
      app.add_subcommand("analyze", "Analyze a stored histogram");
  cmd_analyze->add_option("--hist", hist_path, "Histogram file")->required();
  cmd_analyze->add_option("--out", report_path,
                          "Report output file (default: stdout)");

  SweepOptions sweep;
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Emit a theory curve as CSV");
  cmd_sweep->add_option("--family", sweep.family,
                        "Sweep family: coherent, fock, tmsv");
  cmd_sweep->add_option("--min", sweep.min, "Range start");
  cmd_sweep->add_option("--max", sweep.max, "Range end");
  cmd_sweep->add_option("--steps", sweep.steps, "Grid points");
  cmd_sweep->add_option("--eta", sweep.eta, "Quantum efficiency");
  cmd_sweep->add_option("--out", sweep.out, "CSV output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitBadInput;
  }

  try {
    if (cmd_theory->parsed()) {
      if (theory.via == "analytic") {
        emit_theory(theory_analytic(theory));
      } else if (theory.via == "pipeline") {
        emit_theory(theory_pipeline(theory));
      } else {
        throw wpd::InvalidParameter("--via must be analytic or pipeline");
      }
    } else if (cmd_simulate->parsed()) {
      const wpd::SimulationConfig cfg = wpd::parse_config_file(config_path);
      const wpd::JointHistogram h = wpd::run_simulation(cfg);
      wpd::write_histogram(resolve_out(out_path), h);
    } else if (cmd_analyze->parsed()) {
      const wpd::JointHistogram h = wpd::read_histogram(hist_path);
      const wpd::AnalysisReport report = wpd::analyze(h);
      if (report_path.empty() || report_path == "-") {
        wpd::write_report(std::cout, report);
      } else {
        wpd::write_report(resolve_out(report_path), report);
      }
    } else if (cmd_sweep->parsed()) {
      run_sweep(sweep);
    }
  } catch (const wpd::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return 0;
}
