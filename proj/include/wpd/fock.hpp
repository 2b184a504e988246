#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <variant>

#include "wpd/errors.hpp"

namespace wpd {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Mode preparations

struct Vacuum {};

struct Coherent {
  Complex amplitude;
};

struct FockN {
  int n;
};

/// Squeezed vacuum with squeezing parameter r >= 0 and phase phi.
/// Only even photon numbers are occupied.
struct Squeezed {
  double r;
  double phi;
};

using ModePreparation = std::variant<Vacuum, Coherent, FockN, Squeezed>;

// ---------------------------------------------------------------------------
// State and distribution types

/// Pure two-mode state on the truncated Fock basis {0..n_max} x {0..n_max}.
/// amp(m, n) is the amplitude of |m, n>.  Probability mass that has left the
/// truncated basis (either at preparation or by scattering past the cutoff)
/// shows up as a squared norm below one; see tail_mass().
struct TwoModeState {
  Eigen::MatrixXcd amp;

  int n_max() const { return static_cast<int>(amp.rows()) - 1; }
  double norm_sq() const { return amp.squaredNorm(); }
};

/// Joint photon-number statistics p(n_A, n_B) on the truncated basis.
struct JointNumberDistribution {
  Eigen::MatrixXd probs;

  int n_max() const { return static_cast<int>(probs.rows()) - 1; }
  double sum() const { return probs.sum(); }
};

/// First and second photon-number moments of the two output modes.
/// random_cov, when present, is the covariance of the five estimators in the
/// order (mean_a, mean_b, mean_a2, mean_b2, mean_ab); sys_err is a vector of
/// hard systematic bounds in the same order.
struct MomentSet {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_a2 = 0.0;
  double mean_b2 = 0.0;
  double mean_ab = 0.0;
  std::optional<Eigen::Matrix<double, 5, 5>> random_cov;
  std::optional<Eigen::Matrix<double, 5, 1>> sys_err;

  double mean_total() const { return mean_a + mean_b; }
};

// ---------------------------------------------------------------------------
// Operations

/// Single-mode Fock amplitudes of a preparation, truncated at n_max.
Eigen::VectorXcd mode_amplitudes(const ModePreparation& prep, int n_max);

/// Smallest cutoff whose single-mode truncation tail is below tau.
int auto_cutoff(const ModePreparation& prep, double tau);

/// Product state psi_{m,n} = a_m b_n.  Throws TruncationTooSmall when the
/// combined tail mass exceeds tau.
TwoModeState prepare_two_mode(const ModePreparation& prep_a,
                              const ModePreparation& prep_b, int n_max,
                              double tau);

/// 50:50 beam splitter with phase theta.  Acts block-diagonally on the
/// total-photon-number sectors; mass scattered past the cutoff is dropped
/// (and becomes visible through tail_mass).
TwoModeState apply_beam_splitter(const TwoModeState& state, double theta);

JointNumberDistribution number_distribution(const TwoModeState& state);

/// Independent binomial thinning of both modes with efficiencies eta_a and
/// eta_b.  Preserves normalization.
JointNumberDistribution apply_loss(const JointNumberDistribution& dist,
                                   double eta_a, double eta_b);

/// Exact first and second moments; no uncertainties attached.
MomentSet photon_moments(const JointNumberDistribution& dist);

double tail_mass(const TwoModeState& state);
double tail_mass(const JointNumberDistribution& dist);

}  // namespace wpd
