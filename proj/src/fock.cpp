#include "wpd/fock.hpp"

#include <cmath>
#include <vector>

namespace wpd {

namespace {

void check_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw InvalidParameter(std::string(what) + " must be finite");
}

void check_finite(Complex z, const char* what) {
  check_finite(z.real(), what);
  check_finite(z.imag(), what);
}

// Amplitudes appended one photon number at a time; returns the running
// amplitude a_n given a_{n-1} (and a_{n-2} implicitly via state).
struct AmplitudeSeries {
  const ModePreparation& prep;

  Complex at(int n, Complex prev) const {
    if (std::holds_alternative<Vacuum>(prep)) {
      return n == 0 ? Complex(1.0) : Complex(0.0);
    }
    if (const auto* c = std::get_if<Coherent>(&prep)) {
      if (n == 0) return Complex(std::exp(-0.5 * std::norm(c->amplitude)));
      return prev * c->amplitude / std::sqrt(double(n));
    }
    if (const auto* f = std::get_if<FockN>(&prep)) {
      return n == f->n ? Complex(1.0) : Complex(0.0);
    }
    const auto& s = std::get<Squeezed>(prep);
    if (n == 0) return Complex(1.0 / std::sqrt(std::cosh(s.r)));
    if (n % 2 == 1) return Complex(0.0);
    // a_{2k} = a_{2k-2} * (-e^{i phi} tanh r) * sqrt((2k-1)/(2k))
    const Complex step = -std::polar(std::tanh(s.r), s.phi) *
                         std::sqrt(double(n - 1) / double(n));
    return prev * step;
  }

  // prev amplitude of the same parity two steps back, needed for squeezed
  Complex prev_for(int n, const Eigen::VectorXcd& amps) const {
    if (std::holds_alternative<Squeezed>(prep) && n >= 2) return amps(n - 2);
    return n >= 1 ? amps(n - 1) : Complex(0.0);
  }
};

void validate(const ModePreparation& prep) {
  if (const auto* c = std::get_if<Coherent>(&prep)) {
    check_finite(c->amplitude, "coherent amplitude");
  } else if (const auto* f = std::get_if<FockN>(&prep)) {
    if (f->n < 0) throw InvalidParameter("fock photon number must be >= 0");
  } else if (const auto* s = std::get_if<Squeezed>(&prep)) {
    check_finite(s->r, "squeezing r");
    check_finite(s->phi, "squeezing phi");
    if (s->r < 0.0) throw InvalidParameter("squeezing r must be >= 0");
  }
}

}  // namespace

Eigen::VectorXcd mode_amplitudes(const ModePreparation& prep, int n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be >= 0");
  validate(prep);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n_max + 1);
  AmplitudeSeries series{prep};
  for (int n = 0; n <= n_max; ++n) {
    amps(n) = series.at(n, series.prev_for(n, amps));
  }
  return amps;
}

int auto_cutoff(const ModePreparation& prep, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be > 0");
  validate(prep);
  if (std::holds_alternative<Vacuum>(prep)) return 0;
  if (const auto* f = std::get_if<FockN>(&prep)) return f->n;

  constexpr int kHardCap = 4096;
  AmplitudeSeries series{prep};
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(kHardCap + 1);
  double cum = 0.0;
  for (int n = 0; n <= kHardCap; ++n) {
    amps(n) = series.at(n, series.prev_for(n, amps));
    cum += std::norm(amps(n));
    if (1.0 - cum < tau) return n;
  }
  throw TruncationTooSmall("no cutoff below hard cap reaches requested tau");
}

TwoModeState prepare_two_mode(const ModePreparation& prep_a,
                              const ModePreparation& prep_b, int n_max,
                              double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("tau must be > 0");
  const Eigen::VectorXcd a = mode_amplitudes(prep_a, n_max);
  const Eigen::VectorXcd b = mode_amplitudes(prep_b, n_max);
  TwoModeState state;
  state.amp = a * b.transpose();
  const double tail = 1.0 - state.norm_sq();
  if (tail > tau) {
    throw TruncationTooSmall("truncation tail " + std::to_string(tail) +
                             " exceeds tolerance " + std::to_string(tau));
  }
  return state;
}

namespace {

// Bessel functions J_0..J_m at x by Miller's backward recurrence (stable for
// decreasing order; the downward pass is renormalized to avoid overflow).
std::vector<double> bessel_j_table(int m, double x) {
  std::vector<double> j(std::size_t(m) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  const int start = m + 16 + int(std::sqrt(40.0 * m + 40.0 * x));
  double jp = 0.0, jc = 1e-300;
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm = (2.0 * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1e250) {
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      for (auto& v : j) v *= 1e-250;
    }
    if (k - 1 <= m) j[std::size_t(k - 1)] = jc;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * jc;
  }
  norm += jc;  // J_0 contribution: J_0 + 2 J_2 + 2 J_4 + ... = 1
  for (auto& v : j) v /= norm;
  return j;
}

}  // namespace

TwoModeState apply_beam_splitter(const TwoModeState& state, double theta) {
  check_finite(theta, "theta");
  const int n = state.n_max();
  TwoModeState out;
  out.amp = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  out.amp(0, 0) = state.amp(0, 0);

  // Creation operators transform as
  //   a+ -> (a+ - e^{-i theta} b+)/sqrt(2),  b+ -> (e^{i theta} a+ + b+)/sqrt(2),
  // which reproduces the coherent-state map
  //   |alpha, beta> -> |(alpha + e^{i theta} beta)/sqrt(2), (beta - e^{-i theta} alpha)/sqrt(2)>.
  // The generating operator is G = xi a+b - conj(xi) ab+, xi = (pi/4) e^{i theta}.
  // Each total-photon sector N evolves by exp(G) restricted to span{|j, N-j>},
  // where G = i H with H Hermitian tridiagonal and spectrum exactly
  // {(pi/4)(2m - N)} (an SU(2) rotation), so |H| <= lambda = pi N / 4.
  // exp(i lambda S) v is evaluated by the Chebyshev expansion
  //   exp(i lambda S) = sum_k (2 - delta_k0) i^k J_k(lambda) T_k(S),
  // whose three-term recurrence is stable because |T_k(S)| <= 1.
  // A ladder construction of the sector unitaries (building U_N from U_{N-1}
  // by applying creation operators) is exponentially unstable past N ~ 100
  // and must not be used here.
  const Complex xi = std::polar(std::acos(-1.0) / 4.0, theta);

  for (int N = 1; N <= 2 * n; ++N) {
    const int jmin = std::max(0, N - n);
    const int jmax = std::min(N, n);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N + 1);
    bool occupied = false;
    for (int j = jmin; j <= jmax; ++j) {
      v(j) = state.amp(j, N - j);
      occupied = occupied || v(j) != Complex(0.0);
    }
    if (!occupied) continue;

    const double lambda = std::acos(-1.0) * N / 4.0;
    // couplings of H = -i G: H_{j+1,j} = -i xi sqrt((j+1)(N-j))
    Eigen::VectorXcd up(N);  // index j: j -> j+1
    for (int j = 0; j < N; ++j) {
      up(j) = Complex(0.0, -1.0) * xi * std::sqrt(double(j + 1) * double(N - j));
    }
    const auto apply_s = [&](const Eigen::VectorXcd& x) {
      Eigen::VectorXcd y = Eigen::VectorXcd::Zero(N + 1);
      for (int j = 0; j < N; ++j) {
        y(j + 1) += up(j) * x(j);
        y(j) += std::conj(up(j)) * x(j + 1);
      }
      return Eigen::VectorXcd(y / lambda);
    };

    const int terms = int(lambda) + 24 + int(2.5 * std::cbrt(lambda + 1.0));
    const std::vector<double> bessel = bessel_j_table(terms, lambda);

    Eigen::VectorXcd t_prev = v;                 // T_0(S) v
    Eigen::VectorXcd t_cur = apply_s(v);         // T_1(S) v
    Eigen::VectorXcd acc = bessel[0] * t_prev +
                           2.0 * Complex(0.0, 1.0) * bessel[1] * t_cur;
    Complex ik(0.0, 1.0);
    for (int k = 2; k <= terms; ++k) {
      Eigen::VectorXcd t_next = 2.0 * apply_s(t_cur) - t_prev;
      ik *= Complex(0.0, 1.0);
      acc += 2.0 * ik * bessel[std::size_t(k)] * t_next;
      t_prev = std::move(t_cur);
      t_cur = std::move(t_next);
    }

    // Components scattered past the cutoff are dropped (they show up as tail
    // mass downstream).
    for (int p = jmin; p <= jmax; ++p) out.amp(p, N - p) = acc(p);
  }
  return out;
}

JointNumberDistribution number_distribution(const TwoModeState& state) {
  JointNumberDistribution dist;
  dist.probs = state.amp.cwiseAbs2();
  return dist;
}

namespace {

// Column-stochastic thinning matrix T(m, n) = C(n, m) eta^m (1-eta)^{n-m}.
Eigen::MatrixXd thinning_matrix(int n_max, double eta) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  if (eta == 0.0) {
    t.row(0).setOnes();
    return t;
  }
  if (eta == 1.0) {
    t.setIdentity();
    return t;
  }
  const double log_eta = std::log(eta);
  const double log_one_minus = std::log1p(-eta);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      const double log_binom = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                               std::lgamma(n - m + 1.0);
      t(m, n) = std::exp(log_binom + m * log_eta + (n - m) * log_one_minus);
    }
  }
  return t;
}

}  // namespace

JointNumberDistribution apply_loss(const JointNumberDistribution& dist,
                                   double eta_a, double eta_b) {
  for (double eta : {eta_a, eta_b}) {
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
      throw InvalidParameter("eta must lie in [0, 1]");
    }
  }
  const int n = dist.n_max();
  const Eigen::MatrixXd ta = thinning_matrix(n, eta_a);
  const Eigen::MatrixXd tb = thinning_matrix(n, eta_b);
  JointNumberDistribution out;
  out.probs = ta * dist.probs * tb.transpose();
  return out;
}

MomentSet photon_moments(const JointNumberDistribution& dist) {
  const int n = dist.n_max();
  Eigen::VectorXd idx(n + 1), idx2(n + 1);
  for (int i = 0; i <= n; ++i) {
    idx(i) = double(i);
    idx2(i) = double(i) * double(i);
  }
  const Eigen::VectorXd pa = dist.probs.rowwise().sum();
  const Eigen::VectorXd pb = dist.probs.colwise().sum();
  MomentSet m;
  m.mean_a = idx.dot(pa);
  m.mean_b = idx.dot(pb);
  m.mean_a2 = idx2.dot(pa);
  m.mean_b2 = idx2.dot(pb);
  m.mean_ab = idx.dot(dist.probs * idx);
  return m;
}

double tail_mass(const TwoModeState& state) { return 1.0 - state.norm_sq(); }

double tail_mass(const JointNumberDistribution& dist) {
  return 1.0 - dist.sum();
}

}  // namespace wpd
