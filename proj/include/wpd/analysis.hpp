#pragma once

#include <string>
#include <vector>

#include "wpd/detector.hpp"
#include "wpd/witness.hpp"

namespace wpd {

struct ValueWithError {
  double value = 0.0;
  double random_err = 0.0;
};

struct AnalysisReport {
  ValueWithError mean_total;
  WitnessResult witness;
  int d_bins = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string input_description;
  std::vector<std::string> warnings;
};

/// Total intensity above which the lowest-order click-to-photon conversion
/// starts to degrade; analyze() attaches a warning past this point.
inline constexpr double kIntensityWarningThreshold = 0.5;

/// Moments of a histogram with full uncertainty bookkeeping: for click
/// histograms the factorial-moment estimator with its systematic bias bounds,
/// for count histograms plain sample moments.  The 5x5 sample covariance of
/// the per-shot statistics (divided by shots) is attached either way.
MomentSet estimate_moments(const JointHistogram& h);

/// Witness values with propagated random errors (delta method through the
/// closed-form eigenvalue gradient) and interval-propagated systematic
/// bounds.
WitnessResult witness_with_errors(const MomentSet& m);

/// Assemble a report from witness values and the measured total intensity.
AnalysisReport significance_report(const WitnessResult& r,
                                   ValueWithError mean_total);

/// Full histogram-to-report pipeline.
AnalysisReport analyze(const JointHistogram& h);

/// Table-style display: value as mantissa e exponent, relative error in
/// parentheses, e.g. "0.395e-2(1±0.006)".
std::string format_with_relative_error(double value, double abs_err);
std::string format_with_relative_error(double value, double abs_err,
                                       int exponent);

}  // namespace wpd
