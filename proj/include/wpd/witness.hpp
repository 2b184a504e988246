#pragma once

#include <Eigen/Dense>

#include "wpd/fock.hpp"

namespace wpd {

/// Symmetric 2x2 matrix, stored by its three independent entries.
struct SymMatrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  SymMatrix2 operator-(const SymMatrix2& o) const {
    return {a11 - o.a11, a12 - o.a12, a22 - o.a22};
  }
};

struct WitnessResult {
  double e_wave = 0.0;
  double e_part = 0.0;
  double err_wave_random = 0.0;
  double err_part_random = 0.0;
  double err_wave_sys = 0.0;
  double err_part_sys = 0.0;
  double significance_wave = 0.0;  // |e|/sigma_total when e < 0, else 0
  double significance_part = 0.0;
};

struct AnalyticResult {
  double e_wave = 0.0;
  double e_part = 0.0;
  double mean_total = 0.0;
};

// ---------------------------------------------------------------------------
// Matrix construction

/// Measured covariance matrix [[Var(M), Cov(M,N)], [Cov(M,N), Var(N)]].
SymMatrix2 covariance_matrix(const MomentSet& m);

/// Particle bound: E(M+N)/4 * [[1, -1], [-1, 1]].
SymMatrix2 bound_particle(const MomentSet& m);

/// Wave bound: diag(E(M), E(N)).
SymMatrix2 bound_wave(const MomentSet& m);

// ---------------------------------------------------------------------------
// Eigenvalue machinery

/// Closed-form minimal eigenvalue; never an iterative solver, so the sign is
/// exact up to rounding.
double min_eigenvalue(const SymMatrix2& s);

/// Gradient of min_eigenvalue with respect to (a11, a12, a22).  In the
/// degenerate case a11 == a22, a12 == 0 the one-sided convention
/// d e / d a12 = -1 is used.
Eigen::Vector3d min_eigenvalue_gradient(const SymMatrix2& s);

/// e_wave and e_part from a MomentSet.  When the MomentSet carries a random
/// covariance and/or systematic bounds, the errors and significances are
/// propagated through the closed-form eigenvalue gradient.
WitnessResult witness_pair(const MomentSet& m);

// ---------------------------------------------------------------------------
// Closed forms for the reference input families (loss included)

/// Two-mode squeezed vacuum: e_wave = e_part = -eta^2 q/(1-q),
/// mean_total = 2 eta q/(1-q).
AnalyticResult analytic_tmsv(double q, double eta);

/// Coherent pair |alpha, beta> mixed at theta: e_wave = 0 and the closed-form
/// e_part; the all-vacuum limit returns exactly (0, 0).
AnalyticResult analytic_coherent(Complex alpha, Complex beta, double theta,
                                 double eta);

/// Photon-number pair |m, n>: e_wave = -eta^2 (m+n)/2,
/// e_part = min{eta^2 m n, eta (1-eta)(m+n)/2}.
AnalyticResult analytic_fock(int m, int n, double eta);

}  // namespace wpd
