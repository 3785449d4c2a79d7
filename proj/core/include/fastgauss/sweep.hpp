#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fastgauss/engine.hpp"

namespace fastgauss {

struct SweepSpec {
  std::filesystem::path reference_path;
  std::optional<std::filesystem::path> query_path;  // absent: monochromatic
  bool weights = false;
  bool rescale = false;
  bool header = false;
  double epsilon = 0.01;
  std::optional<double> h_star;  // absent: select_bandwidth
  std::vector<double> multipliers{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  std::vector<Algorithm> algorithms{Algorithm::Dito};
  std::size_t leaf_threshold = kDefaultLeafThreshold;
  int plimit = 0;
  bool verify = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ReportRow {
  Algorithm algorithm = Algorithm::Naive;
  double multiplier = 1.0;
  double bandwidth = 1.0;
  double seconds = 0.0;
  std::optional<double> max_rel_error;
  Counters counters;
};

struct Report {
  std::size_t reference_count = 0;
  std::size_t query_count = 0;
  std::size_t dim = 0;
  double h_star = 0.0;
  double epsilon = 0.0;
  double build_seconds = 0.0;
  std::vector<double> multipliers;
  std::vector<Algorithm> algorithms;
  std::vector<ReportRow> rows;  // algorithm-major, multipliers in order

  double total_seconds(Algorithm algorithm) const;
  /// True when a verified dual-tree row exceeds epsilon.
  bool has_violation() const;
};

/// Sweep over in-memory data. Trees are built once; every dual-tree row is
/// charged its traversal time, the moment refresh for its bandwidth (DITO)
/// and an equal share of the tree build time.
Report run_sweep(const SweepSpec& spec, const PointStore& references,
                 const PointStore* queries = nullptr);
/// Loads the reference (and query) files named in `spec` and runs the sweep.
Report run_sweep(const SweepSpec& spec);

/// max_q |approx - exact| / exact (exact == 0 contributes only if approx != 0).
double max_relative_error(const std::vector<double>& approx, const std::vector<double>& exact);

enum class ReportFormat { Table, Csv, Json };

ReportFormat parse_report_format(const std::string& name);

void emit_report(const Report& report, ReportFormat format, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace fastgauss
