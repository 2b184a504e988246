#include "wpd/witness.hpp"

#include <cmath>

namespace wpd {

SymMatrix2 covariance_matrix(const MomentSet& m) {
  return {m.mean_a2 - m.mean_a * m.mean_a, m.mean_ab - m.mean_a * m.mean_b,
          m.mean_b2 - m.mean_b * m.mean_b};
}

SymMatrix2 bound_particle(const MomentSet& m) {
  const double t = m.mean_total() / 4.0;
  return {t, -t, t};
}

SymMatrix2 bound_wave(const MomentSet& m) { return {m.mean_a, 0.0, m.mean_b}; }

double min_eigenvalue(const SymMatrix2& s) {
  const double half_trace = 0.5 * (s.a11 + s.a22);
  const double half_diff = 0.5 * (s.a11 - s.a22);
  return half_trace - std::hypot(half_diff, s.a12);
}

Eigen::Vector3d min_eigenvalue_gradient(const SymMatrix2& s) {
  const double half_diff = 0.5 * (s.a11 - s.a22);
  const double r = std::hypot(half_diff, s.a12);
  if (r == 0.0) {
    // Degenerate: e = a - |b| locally; take the conservative one-sided slope.
    return {0.5, -1.0, 0.5};
  }
  return {0.5 - half_diff / (2.0 * r), -s.a12 / r, 0.5 + half_diff / (2.0 * r)};
}

namespace {

struct Propagated {
  double e = 0.0;
  double random_err = 0.0;
  double sys_err = 0.0;
};

// Chain rule through the (a11, a12, a22) entries into the five moments
// (mean_a, mean_b, mean_a2, mean_b2, mean_ab).
Propagated propagate(const MomentSet& m, const SymMatrix2& cmb, bool particle) {
  Propagated out;
  out.e = min_eigenvalue(cmb);
  if (!m.random_cov && !m.sys_err) return out;

  const Eigen::Vector3d de = min_eigenvalue_gradient(cmb);
  Eigen::Matrix<double, 3, 5> jac = Eigen::Matrix<double, 3, 5>::Zero();
  // a11 = mean_a2 - mean_a^2 - bound11
  jac(0, 0) = -2.0 * m.mean_a;
  jac(0, 2) = 1.0;
  // a22 = mean_b2 - mean_b^2 - bound22
  jac(2, 1) = -2.0 * m.mean_b;
  jac(2, 3) = 1.0;
  // a12 = mean_ab - mean_a mean_b - bound12
  jac(1, 0) = -m.mean_b;
  jac(1, 1) = -m.mean_a;
  jac(1, 4) = 1.0;
  if (particle) {
    jac(0, 0) -= 0.25;
    jac(0, 1) -= 0.25;
    jac(2, 0) -= 0.25;
    jac(2, 1) -= 0.25;
    jac(1, 0) += 0.25;
    jac(1, 1) += 0.25;
  } else {
    jac(0, 0) -= 1.0;
    jac(2, 1) -= 1.0;
  }
  const Eigen::Matrix<double, 5, 1> grad = jac.transpose() * de;
  if (m.random_cov) {
    const double var = grad.dot(*m.random_cov * grad);
    out.random_err = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  if (m.sys_err) {
    // The click-to-photon conversion bias is one-sided: click-derived
    // factorial moments never exceed the normal-ordered photon moments, so
    // each moment error lies in [0, sys_i] rather than [-sys_i, sys_i].
    // Interval propagation through the gradient therefore yields the
    // asymmetric interval [-down, up]; report the larger half-width.
    double up = 0.0, down = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double c = grad(i) * (*m.sys_err)(i);
      if (c > 0.0) {
        up += c;
      } else {
        down -= c;
      }
    }
    out.sys_err = std::max(up, down);
  }
  return out;
}

double significance(const Propagated& p) {
  if (p.e >= 0.0) return 0.0;
  const double sigma = p.random_err + p.sys_err;
  if (sigma <= 0.0) return 0.0;
  return -p.e / sigma;
}

}  // namespace

WitnessResult witness_pair(const MomentSet& m) {
  const SymMatrix2 c = covariance_matrix(m);
  const Propagated wave = propagate(m, c - bound_wave(m), false);
  const Propagated part = propagate(m, c - bound_particle(m), true);
  WitnessResult r;
  r.e_wave = wave.e;
  r.e_part = part.e;
  r.err_wave_random = wave.random_err;
  r.err_part_random = part.random_err;
  r.err_wave_sys = wave.sys_err;
  r.err_part_sys = part.sys_err;
  r.significance_wave = significance(wave);
  r.significance_part = significance(part);
  return r;
}

AnalyticResult analytic_tmsv(double q, double eta) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidParameter("q must lie in (0, 1)");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  const double e = -eta * eta * q / (1.0 - q);
  return {e, e, 2.0 * eta * q / (1.0 - q)};
}

AnalyticResult analytic_coherent(Complex alpha, Complex beta, double theta,
                                 double eta) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) ||
      !std::isfinite(beta.real()) || !std::isfinite(beta.imag()) ||
      !std::isfinite(theta) || !std::isfinite(eta)) {
    throw InvalidParameter("analytic_coherent: non-finite input");
  }
  const double total = std::norm(alpha) + std::norm(beta);
  if (total == 0.0) return {0.0, 0.0, 0.0};
  const double interference =
      (std::polar(1.0, theta) * beta * std::conj(alpha)).real();
  const double ratio = 4.0 * interference / total;
  const double e_part =
      eta * total / 4.0 * (1.0 - std::sqrt(1.0 + ratio * ratio));
  return {0.0, e_part, eta * total};
}

AnalyticResult analytic_fock(int m, int n, double eta) {
  if (m < 0 || n < 0) throw InvalidParameter("photon numbers must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0, 1]");
  const double total = double(m + n);
  const double e_wave = -eta * eta * total / 2.0;
  const double e_part =
      std::min(eta * eta * double(m) * double(n), eta * (1.0 - eta) * total / 2.0);
  return {e_wave, e_part, eta * total};
}

}  // namespace wpd
