#pragma once

#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "wpd/analysis.hpp"
#include "wpd/detector.hpp"

namespace wpd {

inline constexpr const char* kHistogramFormat = "wpd-hist-v1";
inline constexpr const char* kReportFormat = "wpd-report-v1";
inline constexpr const char* kSweepFormat = "wpd-sweep-v1";

/// CSV with a commented header block, then one `k_a,k_b,count` row per
/// nonzero cell.  Bit-exact integer round trips.
void write_histogram(std::ostream& os, const JointHistogram& h);
void write_histogram(const std::string& path, const JointHistogram& h);

JointHistogram read_histogram(std::istream& is);
JointHistogram read_histogram(const std::string& path);

nlohmann::json report_to_json(const AnalysisReport& report);

void write_report(std::ostream& os, const AnalysisReport& report);
void write_report(const std::string& path, const AnalysisReport& report);

}  // namespace wpd
