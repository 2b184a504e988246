#include "wpd/analysis.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace wpd {

namespace {

// Per-outcome values of the five moment estimators, in MomentSet order.
std::array<Eigen::MatrixXd, 5> per_cell_statistics(const JointHistogram& h) {
  std::array<Eigen::MatrixXd, 5> s;
  const auto rows = h.counts.rows();
  const auto cols = h.counts.cols();
  for (auto& m : s) m.resize(rows, cols);
  if (h.kind == JointHistogram::Kind::counts) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        const double m = double(i), n = double(j);
        s[0](i, j) = m;
        s[1](i, j) = n;
        s[2](i, j) = m * m;
        s[3](i, j) = n * n;
        s[4](i, j) = m * n;
      }
    }
    return s;
  }
  const int d = h.d_bins;
  const double dd = double(d);
  auto w = [d](Eigen::Index k, int m) {
    if (k < m) return 0.0;
    double r = 1.0;
    for (int i = 0; i < m; ++i) r *= double(k - i) / double(d - i);
    return r;
  };
  for (Eigen::Index ka = 0; ka < rows; ++ka) {
    for (Eigen::Index kb = 0; kb < cols; ++kb) {
      const double w10 = w(ka, 1), w01 = w(kb, 1);
      s[0](ka, kb) = dd * w10;
      s[1](ka, kb) = dd * w01;
      s[2](ka, kb) = dd * dd * w(ka, 2) + dd * w10;
      s[3](ka, kb) = dd * dd * w(kb, 2) + dd * w01;
      s[4](ka, kb) = dd * dd * w10 * w01;
    }
  }
  return s;
}

}  // namespace

MomentSet estimate_moments(const JointHistogram& h) {
  if (h.shots < 2) throw InsufficientData("need at least 2 shots");
  if (h.total() != h.shots) {
    throw InvalidParameter("histogram counts do not add up to shots");
  }
  const auto stats = per_cell_statistics(h);
  const Eigen::MatrixXd weights = h.counts.cast<double>() / double(h.shots);

  Eigen::Matrix<double, 5, 1> mean;
  for (int i = 0; i < 5; ++i) mean(i) = weights.cwiseProduct(stats[i]).sum();

  Eigen::Matrix<double, 5, 5> cov;
  for (int i = 0; i < 5; ++i) {
    for (int j = i; j < 5; ++j) {
      const double second =
          weights.cwiseProduct(stats[i].cwiseProduct(stats[j])).sum();
      cov(i, j) = cov(j, i) = (second - mean(i) * mean(j)) / double(h.shots - 1);
    }
  }

  MomentSet m;
  if (h.kind == JointHistogram::Kind::clicks) {
    m = moments_from_clicks(click_moments(h), h.d_bins);
  } else {
    m.mean_a = mean(0);
    m.mean_b = mean(1);
    m.mean_a2 = mean(2);
    m.mean_b2 = mean(3);
    m.mean_ab = mean(4);
    // raw counts carry no click-to-photon conversion bias
  }
  m.random_cov = cov;
  return m;
}

WitnessResult witness_with_errors(const MomentSet& m) { return witness_pair(m); }

AnalysisReport significance_report(const WitnessResult& r,
                                   ValueWithError mean_total) {
  AnalysisReport report;
  report.witness = r;
  auto significance = [](double e, double random, double sys) {
    const double sigma = random + sys;
    if (e >= 0.0 || sigma <= 0.0) return 0.0;
    return -e / sigma;
  };
  report.witness.significance_wave =
      significance(r.e_wave, r.err_wave_random, r.err_wave_sys);
  report.witness.significance_part =
      significance(r.e_part, r.err_part_random, r.err_part_sys);
  report.mean_total = mean_total;
  return report;
}

AnalysisReport analyze(const JointHistogram& h) {
  const MomentSet m = estimate_moments(h);
  const WitnessResult r = witness_with_errors(m);

  ValueWithError total;
  total.value = m.mean_total();
  const auto& cov = *m.random_cov;
  const double var = cov(0, 0) + cov(1, 1) + 2.0 * cov(0, 1);
  total.random_err = var > 0.0 ? std::sqrt(var) : 0.0;

  AnalysisReport report = significance_report(r, total);
  report.d_bins = h.d_bins;
  report.shots = h.shots;
  report.seed = h.seed;
  report.input_description = h.config_echo;
  if (h.kind == JointHistogram::Kind::clicks &&
      total.value > kIntensityWarningThreshold) {
    report.warnings.push_back(
        "total mean photon number exceeds the low-intensity regime; "
        "click-to-photon conversion bias may be large");
  }
  return report;
}

std::string format_with_relative_error(double value, double abs_err,
                                       int exponent) {
  char buf[96];
  if (value == 0.0) {
    if (abs_err == 0.0) return "0";
    std::snprintf(buf, sizeof buf, "0(±%.1e)", abs_err);
    return buf;
  }
  const double mantissa = value / std::pow(10.0, exponent);
  const double rel = std::abs(abs_err / value);
  if (rel < 1.0) {
    std::snprintf(buf, sizeof buf, "%.3fe%d(1±%.3f)", mantissa, exponent, rel);
  } else {
    std::snprintf(buf, sizeof buf, "%.3fe%d(1±%.0f)", mantissa, exponent, rel);
  }
  return buf;
}

std::string format_with_relative_error(double value, double abs_err) {
  if (value == 0.0) return format_with_relative_error(value, abs_err, 0);
  // mantissa kept in [0.1, 1), table style
  const int exponent = int(std::floor(std::log10(std::abs(value)))) + 1;
  return format_with_relative_error(value, abs_err, exponent);
}

}  // namespace wpd
