#include "wpd/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <tuple>
#include <vector>

namespace wpd {

namespace {

void require_stream(const std::ios& s, const std::string& what) {
  if (!s) throw IoError("I/O failure: " + what);
}

}  // namespace

void write_histogram(std::ostream& os, const JointHistogram& h) {
  os << "# format=" << kHistogramFormat << "\n";
  os << "# kind="
     << (h.kind == JointHistogram::Kind::clicks ? "clicks" : "counts") << "\n";
  os << "# d_bins=" << h.d_bins << "\n";
  os << "# shots=" << h.shots << "\n";
  os << "# seed=" << h.seed << "\n";
  if (!h.config_echo.empty()) os << "# config=" << h.config_echo << "\n";
  os << "k_a,k_b,count\n";
  for (Eigen::Index i = 0; i < h.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.counts.cols(); ++j) {
      if (h.counts(i, j) != 0) {
        os << i << "," << j << "," << h.counts(i, j) << "\n";
      }
    }
  }
  require_stream(os, "writing histogram");
}

void write_histogram(const std::string& path, const JointHistogram& h) {
  std::ofstream os(path);
  require_stream(os, "opening " + path);
  write_histogram(os, h);
}

JointHistogram read_histogram(std::istream& is) {
  JointHistogram h;
  h.counts.resize(0, 0);
  std::string line;
  bool format_seen = false;
  bool kind_seen = false;
  std::vector<std::tuple<int, int, std::uint64_t>> cells;
  int max_a = 0, max_b = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      const std::string value = line.substr(eq + 1);
      if (key == "format") {
        if (value != kHistogramFormat) {
          throw IoError("unsupported histogram format: " + value);
        }
        format_seen = true;
      } else if (key == "kind") {
        if (value == "clicks") h.kind = JointHistogram::Kind::clicks;
        else if (value == "counts") h.kind = JointHistogram::Kind::counts;
        else throw IoError("unknown histogram kind: " + value);
        kind_seen = true;
      } else if (key == "d_bins") {
        h.d_bins = std::stoi(value);
      } else if (key == "shots") {
        h.shots = std::stoull(value);
      } else if (key == "seed") {
        h.seed = std::stoull(value);
      } else if (key == "config") {
        h.config_echo = value;
      }
      continue;
    }
    if (line.rfind("k_a", 0) == 0) continue;  // column header
    std::istringstream row(line);
    int a, b;
    char c1, c2;
    std::uint64_t count;
    if (!(row >> a >> c1 >> b >> c2 >> count) || c1 != ',' || c2 != ',') {
      throw IoError("malformed histogram row: " + line);
    }
    if (a < 0 || b < 0) throw IoError("negative outcome in histogram row");
    cells.emplace_back(a, b, count);
    max_a = std::max(max_a, a);
    max_b = std::max(max_b, b);
  }
  if (!format_seen) throw IoError("missing format header");
  if (!kind_seen) throw IoError("missing kind header");
  int rows = max_a + 1, cols = max_b + 1;
  if (h.kind == JointHistogram::Kind::clicks) {
    if (max_a > h.d_bins || max_b > h.d_bins) {
      throw IoError("click outcome exceeds d_bins");
    }
    rows = cols = h.d_bins + 1;
  }
  h.counts = Eigen::Matrix<std::uint64_t, Eigen::Dynamic,
                           Eigen::Dynamic>::Zero(rows, cols);
  for (const auto& [a, b, count] : cells) h.counts(a, b) += count;
  if (h.total() != h.shots) {
    throw IoError("histogram counts do not add up to declared shots");
  }
  return h;
}

JointHistogram read_histogram(const std::string& path) {
  std::ifstream is(path);
  require_stream(is, "opening " + path);
  return read_histogram(is);
}

namespace {

nlohmann::json value_block(double value, double random_err, double sys_err,
                           double significance) {
  return {{"value", value},
          {"random_err", random_err},
          {"sys_err", sys_err},
          {"significance", significance},
          {"display",
           format_with_relative_error(value, random_err + sys_err)}};
}

}  // namespace

nlohmann::json report_to_json(const AnalysisReport& report) {
  nlohmann::json j;
  j["format"] = kReportFormat;
  j["d_bins"] = report.d_bins;
  j["shots"] = report.shots;
  j["seed"] = report.seed;
  if (!report.input_description.empty()) {
    j["input"] = nlohmann::json::parse(report.input_description, nullptr,
                                       /*allow_exceptions=*/false);
    if (j["input"].is_discarded()) j["input"] = report.input_description;
  }
  j["mean_total"] = {
      {"value", report.mean_total.value},
      {"random_err", report.mean_total.random_err},
      {"display", format_with_relative_error(report.mean_total.value,
                                             report.mean_total.random_err)}};
  const auto& w = report.witness;
  j["e_wave"] = value_block(w.e_wave, w.err_wave_random, w.err_wave_sys,
                            w.significance_wave);
  j["e_part"] = value_block(w.e_part, w.err_part_random, w.err_part_sys,
                            w.significance_part);
  j["warnings"] = report.warnings;
  return j;
}

void write_report(std::ostream& os, const AnalysisReport& report) {
  os << report_to_json(report).dump(2) << "\n";
  require_stream(os, "writing report");
}

void write_report(const std::string& path, const AnalysisReport& report) {
  std::ofstream os(path);
  require_stream(os, "opening " + path);
  write_report(os, report);
}

}  // namespace wpd
