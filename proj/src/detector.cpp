#include "wpd/detector.hpp"

#include <cmath>

namespace wpd {

void merge(JointHistogram& a, const JointHistogram& b) {
  if (a.kind != b.kind || a.d_bins != b.d_bins) {
    throw InvalidParameter("cannot merge histograms of different layout");
  }
  const auto rows = std::max(a.counts.rows(), b.counts.rows());
  const auto cols = std::max(a.counts.cols(), b.counts.cols());
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> merged =
      Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows,
                                                                         cols);
  merged.topLeftCorner(a.counts.rows(), a.counts.cols()) = a.counts;
  merged.topLeftCorner(b.counts.rows(), b.counts.cols()) += b.counts;
  a.counts = std::move(merged);
  a.shots += b.shots;
}

Eigen::VectorXd occupancy_kernel(int n, int d) {
  if (n < 0) throw InvalidParameter("photon number must be >= 0");
  if (d < 1) throw InvalidParameter("bin count must be >= 1");
  // One photon at a time: a new photon lands in an occupied bin (k/d) or
  // opens a new one.  Stable, all terms nonnegative.
  Eigen::VectorXd p = Eigen::VectorXd::Zero(d + 1);
  p(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(d + 1);
    for (int k = 0; k <= std::min(i, d); ++k) {
      if (p(k) == 0.0) continue;
      next(k) += p(k) * double(k) / d;
      if (k < d) next(k + 1) += p(k) * double(d - k) / d;
    }
    p = std::move(next);
  }
  return p;
}

ClickDistribution click_distribution(const JointNumberDistribution& dist,
                                     int d, double tau) {
  if (d < 1) throw InvalidParameter("bin count must be >= 1");
  const double tail = tail_mass(dist);
  if (tail > tau) {
    throw TruncationTooSmall("distribution tail mass " + std::to_string(tail) +
                             " exceeds guard " + std::to_string(tau));
  }
  const int n = dist.n_max();
  Eigen::MatrixXd kernel(d + 1, n + 1);
  for (int nn = 0; nn <= n; ++nn) kernel.col(nn) = occupancy_kernel(nn, d);
  ClickDistribution c;
  c.d_bins = d;
  c.probs = kernel * dist.probs * kernel.transpose();
  return c;
}

namespace {

double binom(int x, int m) {
  if (m < 0 || x < m) return 0.0;
  double r = 1.0;
  for (int i = 0; i < m; ++i) r = r * double(x - i) / double(i + 1);
  return r;
}

// Per-outcome weight C(kA,mA) C(kB,mB) / (C(D,mA) C(D,mB)); bounded by 1.
Eigen::MatrixXd weight_matrix(int d, int m_a, int m_b) {
  if (m_a < 0 || m_b < 0) throw InvalidParameter("moment order must be >= 0");
  if (m_a > d || m_b > d) {
    throw OrderTooHigh("factorial-moment order exceeds bin count");
  }
  const double norm = binom(d, m_a) * binom(d, m_b);
  Eigen::MatrixXd w(d + 1, d + 1);
  for (int ka = 0; ka <= d; ++ka) {
    for (int kb = 0; kb <= d; ++kb) {
      w(ka, kb) = binom(ka, m_a) * binom(kb, m_b) / norm;
    }
  }
  return w;
}

}  // namespace

FactorialMomentEstimate factorial_moment(const ClickDistribution& c, int m_a,
                                         int m_b) {
  const Eigen::MatrixXd w = weight_matrix(c.d_bins, m_a, m_b);
  return {w.cwiseProduct(c.probs).sum(), 0.0, m_a, m_b};
}

FactorialMomentEstimate factorial_moment(const JointHistogram& h, int m_a,
                                         int m_b) {
  if (h.kind != JointHistogram::Kind::clicks) {
    throw InvalidParameter("factorial moments apply to click histograms");
  }
  if (h.shots == 0) throw InsufficientData("empty histogram");
  const Eigen::MatrixXd w = weight_matrix(h.d_bins, m_a, m_b);
  const double inv_shots = 1.0 / double(h.shots);
  double sum = 0.0, sum_sq = 0.0;
  for (int ka = 0; ka <= h.d_bins; ++ka) {
    for (int kb = 0; kb <= h.d_bins; ++kb) {
      const double cnt = double(h.counts(ka, kb));
      if (cnt == 0.0) continue;
      sum += cnt * w(ka, kb);
      sum_sq += cnt * w(ka, kb) * w(ka, kb);
    }
  }
  const double mean = sum * inv_shots;
  double err = 0.0;
  if (h.shots > 1) {
    const double var = std::max(0.0, sum_sq * inv_shots - mean * mean);
    err = std::sqrt(var / double(h.shots - 1));
  }
  return {mean, err, m_a, m_b};
}

namespace {

double require(const MomentMap& m, int a, int b) {
  const auto it = m.find({a, b});
  if (it == m.end()) {
    throw MissingOrder("factorial moment of order (" + std::to_string(a) +
                       ", " + std::to_string(b) + ") not available");
  }
  return it->second.value;
}

// Upper estimate of <:n_A^a n_B^b:>.  The raw D^{a+b} M_{a,b} underestimates
// the normal-ordered moment by roughly the next-order term of the binomial
// expansion, so that term is added back recursively as long as higher orders
// are present in the map.  Without the correction the first-order error bound
// below would undershoot the true conversion bias.
double moment_upper(const MomentMap& m, int d, int a, int b) {
  const double raw = std::pow(double(d), double(a + b)) * require(m, a, b);
  double corr = 0.0;
  if (a > 0 && m.count({a + 1, b}) != 0) {
    corr += a * moment_upper(m, d, a + 1, b);
  }
  if (b > 0 && m.count({a, b + 1}) != 0) {
    corr += b * moment_upper(m, d, a, b + 1);
  }
  return raw + corr / (2.0 * d);
}

}  // namespace

double systematic_error(const MomentMap& m, int d, int m_a, int m_b) {
  if (m_a < 0 || m_b < 0) throw InvalidParameter("moment order must be >= 0");
  if (m_a == 0 && m_b == 0) return 0.0;
  double bound = 0.0;
  if (m_a > 0) bound += m_a * moment_upper(m, d, m_a + 1, m_b);
  if (m_b > 0) bound += m_b * moment_upper(m, d, m_a, m_b + 1);
  return bound / (2.0 * d);
}

MomentSet moments_from_clicks(const MomentMap& m, int d) {
  const double dd = double(d);
  MomentSet out;
  out.mean_a = dd * require(m, 1, 0);
  out.mean_b = dd * require(m, 0, 1);
  out.mean_ab = dd * dd * require(m, 1, 1);
  out.mean_a2 = dd * dd * require(m, 2, 0) + out.mean_a;
  out.mean_b2 = dd * dd * require(m, 0, 2) + out.mean_b;
  Eigen::Matrix<double, 5, 1> sys;
  sys(0) = systematic_error(m, d, 1, 0);
  sys(1) = systematic_error(m, d, 0, 1);
  // <n^2> = D^2 M_{2,0} + D M_{1,0} carries the bias of both terms.
  sys(2) = systematic_error(m, d, 2, 0) + sys(0);
  sys(3) = systematic_error(m, d, 0, 2) + sys(1);
  sys(4) = systematic_error(m, d, 1, 1);
  out.sys_err = sys;
  return out;
}

}  // namespace wpd
