#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "wpd/fock.hpp"

namespace wpd {

inline constexpr int kDefaultBins = 8;

/// Exact joint click statistics c[k_A][k_B], k in 0..D.
struct ClickDistribution {
  Eigen::MatrixXd probs;
  int d_bins = kDefaultBins;
};

/// Empirical joint histogram.  `clicks` histograms hold (k_A, k_B) click
/// numbers bounded by d_bins; `counts` histograms hold raw particle counts
/// (M, N) from the classical samplers and carry d_bins = 0.
struct JointHistogram {
  enum class Kind { clicks, counts };

  Kind kind = Kind::clicks;
  int d_bins = kDefaultBins;
  Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string config_echo;  // compact single-line config, for file round trips

  std::uint64_t total() const { return counts.sum(); }
};

/// Merge b into a (associative accumulation of independent runs).
void merge(JointHistogram& a, const JointHistogram& b);

struct FactorialMomentEstimate {
  double value = 0.0;
  double random_err = 0.0;  // zero for exact distributions
  int m_a = 0;
  int m_b = 0;
};

using MomentMap = std::map<std::pair<int, int>, FactorialMomentEstimate>;

/// P(k clicks | n photons) for n photons thrown independently into d
/// uniform bins.  Row sums to one.
Eigen::VectorXd occupancy_kernel(int n, int d);

/// Click statistics of a photon-number distribution behind a D-bin
/// time-multiplexed detector.  Throws TruncationTooSmall when the
/// distribution's tail mass exceeds tau.
ClickDistribution click_distribution(const JointNumberDistribution& dist,
                                     int d, double tau = 1e-10);

/// Normalized factorial moment
///   M_{mA,mB} = sum_{kA,kB} C(kA,mA) C(kB,mB) / (C(D,mA) C(D,mB)) c_{kA,kB}.
FactorialMomentEstimate factorial_moment(const ClickDistribution& c, int m_a,
                                         int m_b);
FactorialMomentEstimate factorial_moment(const JointHistogram& h, int m_a,
                                         int m_b);

/// All factorial moments with m_a + m_b <= max_order_sum.  The default covers
/// the reconstruction orders plus two correction orders for the bias bound.
template <typename Source>
MomentMap click_moments(const Source& c, int max_order_sum = 4) {
  MomentMap map;
  for (int a = 0; a <= max_order_sum; ++a) {
    for (int b = 0; a + b <= max_order_sum; ++b) {
      map[{a, b}] = factorial_moment(c, a, b);
    }
  }
  return map;
}

/// Hard bound on |<:n_A^mA n_B^mB:> - D^{mA+mB} M_{mA,mB}| from the
/// next-order factorial moments.
double systematic_error(const MomentMap& m, int d, int m_a, int m_b);

/// Lowest-order photon moments from factorial moments, with the systematic
/// bias bounds attached:
///   E(M) = D M_{1,0},  <n_A^2> = D^2 M_{2,0} + D M_{1,0},  etc.
MomentSet moments_from_clicks(const MomentMap& m, int d);

}  // namespace wpd
