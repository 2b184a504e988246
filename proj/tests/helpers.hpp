#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "wpd/detector.hpp"
#include "wpd/fock.hpp"

namespace wpd::test {

// Regularized lower incomplete gamma P(a, x), series/continued-fraction form.
inline double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) return 0.0;
  if (x == 0.0) return 0.0;
  const double log_gamma = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma);
  }
  // Lentz continued fraction for Q(a, x)
  double b = x + 1.0 - a;
  double c = 1e308;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - log_gamma) * h;
  return 1.0 - q;
}

inline double chi_square_cdf(double x, double dof) {
  return gamma_p(dof / 2.0, x / 2.0);
}

// Pooled two-sample chi-square p-value on two histograms of the same layout.
inline double two_sample_chi_square_p(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  const double na = [&] {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
  }();
  const double nb = [&] {
    double s = 0.0;
    for (double v : b) s += v;
    return s;
  }();
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  double stat = 0.0;
  int dof = -1;
  // Pool sparse cells so expected counts stay reasonable.
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pa += a[i];
    pb += b[i];
    if (pa + pb >= 10.0 || i + 1 == a.size()) {
      if (pa + pb > 0.0) {
        const double diff = ka * pa - kb * pb;
        stat += diff * diff / (pa + pb);
        ++dof;
      }
      pa = pb = 0.0;
    }
  }
  if (dof < 1) return 1.0;
  return 1.0 - chi_square_cdf(stat, double(dof));
}

// Independent photon-to-bin Monte Carlo click simulator (std::mt19937; shares
// nothing with the library's samplers).
inline Eigen::MatrixXd brute_force_clicks(const JointNumberDistribution& dist,
                                          int d, std::size_t samples,
                                          unsigned seed) {
  std::mt19937 rng(seed);
  const int n = dist.n_max();
  std::vector<double> flat;
  flat.reserve(std::size_t(n + 1) * std::size_t(n + 1));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) flat.push_back(dist.probs(a, b));
  }
  std::discrete_distribution<std::size_t> pick(flat.begin(), flat.end());
  std::uniform_int_distribution<int> bin(0, d - 1);
  Eigen::MatrixXd freq = Eigen::MatrixXd::Zero(d + 1, d + 1);
  auto clicks = [&](int photons) {
    std::uint64_t occupied = 0;
    for (int i = 0; i < photons; ++i) occupied |= std::uint64_t(1) << bin(rng);
    int k = 0;
    while (occupied != 0) {
      k += int(occupied & 1u);
      occupied >>= 1;
    }
    return k;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t cell = pick(rng);
    const int na = int(cell / std::size_t(n + 1));
    const int nb = int(cell % std::size_t(n + 1));
    freq(clicks(na), clicks(nb)) += 1.0;
  }
  return freq / double(samples);
}

// Exact Fock-basis value of the normalized factorial moment:
//   sum_p p(nA, nB) F(nA, mA) F(nB, mB),
//   F(n, m) = sum_j C(m, j) (-1)^j (1 - j/D)^n.
inline double factorial_moment_oracle(const JointNumberDistribution& dist,
                                      int d, int m_a, int m_b) {
  const int n = dist.n_max();
  auto fock_factor = [d](int photons, int order) {
    double sum = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) binom = binom * double(order - j + 1) / double(j);
      sum += (j % 2 == 0 ? 1.0 : -1.0) * binom *
             std::pow(1.0 - double(j) / d, double(photons));
    }
    return sum;
  };
  double total = 0.0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      if (dist.probs(a, b) == 0.0) continue;
      total += dist.probs(a, b) * fock_factor(a, m_a) * fock_factor(b, m_b);
    }
  }
  return total;
}

}  // namespace wpd::test
