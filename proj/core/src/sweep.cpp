#include "fastgauss/sweep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fastgauss/bandwidth.hpp"
#include "fastgauss/dataset.hpp"

namespace fastgauss {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_multiplier(double k) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(0) << k;
  return s.str();
}

void emit_table(const Report& r, std::ostream& out) {
  out << "N_R=" << r.reference_count << " N_Q=" << r.query_count << " D=" << r.dim
      << " h*=" << std::setprecision(6) << r.h_star << " eps=" << r.epsilon << '\n';
  out << "seconds per bandwidth multiple (tree build " << std::fixed << std::setprecision(4)
      << r.build_seconds << "s shared across columns)\n";
  out << std::defaultfloat;
  out << std::left << std::setw(8) << "alg" << std::right;
  for (double k : r.multipliers) out << std::setw(11) << format_multiplier(k);
  out << std::setw(12) << "sum" << '\n';

  bool any_verified = false;
  for (Algorithm alg : r.algorithms) {
    out << std::left << std::setw(8) << algorithm_name(alg) << std::right << std::fixed
        << std::setprecision(4);
    for (const auto& row : r.rows) {
      if (row.algorithm != alg) continue;
      out << std::setw(11) << row.seconds;
      any_verified = any_verified || row.max_rel_error.has_value();
    }
    out << std::setw(12) << r.total_seconds(alg) << std::defaultfloat << '\n';
  }
  if (!any_verified) return;

  out << "max relative error\n";
  for (Algorithm alg : r.algorithms) {
    out << std::left << std::setw(8) << algorithm_name(alg) << std::right << std::scientific
        << std::setprecision(2);
    for (const auto& row : r.rows) {
      if (row.algorithm != alg) continue;
      if (row.max_rel_error) {
        out << std::setw(11) << *row.max_rel_error;
      } else {
        out << std::setw(11) << "-";
      }
    }
    out << std::defaultfloat << '\n';
  }
}

void emit_csv(const Report& r, std::ostream& out) {
  out << "algorithm,multiplier,bandwidth,seconds,algorithm_total_seconds,max_rel_error,"
         "node_pairs,base_cases,fd_prunes,dh_prunes,dl_prunes,h2l_prunes,pruned_pairs,"
         "exhaustive_pairs\n";
  out << std::setprecision(17);
  for (const auto& row : r.rows) {
    const auto& c = row.counters;
    out << algorithm_name(row.algorithm) << ',' << row.multiplier << ',' << row.bandwidth << ','
        << row.seconds << ',' << r.total_seconds(row.algorithm) << ',';
    if (row.max_rel_error) out << *row.max_rel_error;
    out << ',' << c.node_pairs << ',' << c.base_cases << ',' << c.fd_prunes << ',' << c.dh_prunes
        << ',' << c.dl_prunes << ',' << c.h2l_prunes << ',' << c.pruned_pairs << ','
        << c.exhaustive_pairs << '\n';
  }
}

void emit_json(const Report& r, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["reference_count"] = r.reference_count;
  doc["query_count"] = r.query_count;
  doc["dim"] = r.dim;
  doc["h_star"] = r.h_star;
  doc["epsilon"] = r.epsilon;
  doc["build_seconds"] = r.build_seconds;
  doc["multipliers"] = r.multipliers;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    const auto& c = row.counters;
    ordered_json j;
    j["algorithm"] = algorithm_name(row.algorithm);
    j["multiplier"] = row.multiplier;
    j["bandwidth"] = row.bandwidth;
    j["seconds"] = row.seconds;
    j["max_rel_error"] = row.max_rel_error ? ordered_json(*row.max_rel_error) : ordered_json();
    j["node_pairs"] = c.node_pairs;
    j["base_cases"] = c.base_cases;
    j["fd_prunes"] = c.fd_prunes;
    j["dh_prunes"] = c.dh_prunes;
    j["dl_prunes"] = c.dl_prunes;
    j["h2l_prunes"] = c.h2l_prunes;
    j["pruned_pairs"] = c.pruned_pairs;
    j["exhaustive_pairs"] = c.exhaustive_pairs;
    rows.push_back(std::move(j));
  }
  doc["rows"] = std::move(rows);
  ordered_json totals = ordered_json::object();
  for (Algorithm alg : r.algorithms) totals[algorithm_name(alg)] = r.total_seconds(alg);
  doc["total_seconds"] = std::move(totals);
  out << doc.dump(2) << '\n';
}

}  // namespace

void SweepSpec::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (h_star && !(*h_star > 0.0 && std::isfinite(*h_star))) {
    throw std::invalid_argument("h* must be positive");
  }
  if (multipliers.empty()) throw std::invalid_argument("need at least one bandwidth multiplier");
  for (double k : multipliers) {
    if (!(k > 0.0 && std::isfinite(k))) throw std::invalid_argument("multipliers must be positive");
  }
  if (algorithms.empty()) throw std::invalid_argument("need at least one algorithm");
  if (leaf_threshold == 0) throw std::invalid_argument("leaf size must be positive");
  if (plimit < 0) throw std::invalid_argument("plimit must be non-negative");
}

double Report::total_seconds(Algorithm algorithm) const {
  double sum = 0.0;
  for (const auto& row : rows) {
    if (row.algorithm == algorithm) sum += row.seconds;
  }
  return sum;
}

bool Report::has_violation() const {
  for (const auto& row : rows) {
    if (row.algorithm != Algorithm::Naive && row.max_rel_error && *row.max_rel_error > epsilon) {
      return true;
    }
  }
  return false;
}

double max_relative_error(const std::vector<double>& approx, const std::vector<double>& exact) {
  if (approx.size() != exact.size()) throw std::invalid_argument("result sizes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double diff = std::abs(approx[i] - exact[i]);
    if (exact[i] == 0.0) {
      if (diff != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, diff / exact[i]);
  }
  return worst;
}

Report run_sweep(const SweepSpec& spec, const PointStore& references, const PointStore* queries) {
  spec.validate();
  if (queries && queries->dim() != references.dim()) {
    throw std::invalid_argument("query and reference dimensions differ");
  }

  Report report;
  report.reference_count = references.size();
  report.query_count = queries ? queries->size() : references.size();
  report.dim = references.dim();
  report.epsilon = spec.epsilon;
  report.multipliers = spec.multipliers;
  report.algorithms = spec.algorithms;
  if (spec.h_star) {
    report.h_star = *spec.h_star;
  } else {
    BandwidthSearch search;
    search.seed = spec.seed;
    report.h_star = select_bandwidth(references, search);
  }

  auto start = Clock::now();
  KdTree rtree(references, spec.leaf_threshold);
  std::optional<KdTree> qtree_storage;
  if (queries) qtree_storage.emplace(*queries, spec.leaf_threshold);
  const KdTree& qtree = qtree_storage ? *qtree_storage : rtree;
  report.build_seconds = since(start);
  const double build_share = report.build_seconds / static_cast<double>(spec.multipliers.size());

  bool wants_naive = spec.verify;
  for (Algorithm alg : spec.algorithms) wants_naive = wants_naive || alg == Algorithm::Naive;

  // Indexed [algorithm][multiplier], flattened algorithm-major at the end.
  std::vector<std::vector<ReportRow>> rows(spec.algorithms.size(),
                                           std::vector<ReportRow>(spec.multipliers.size()));
  for (std::size_t m = 0; m < spec.multipliers.size(); ++m) {
    RunConfig config;
    config.epsilon = spec.epsilon;
    config.bandwidth = report.h_star * spec.multipliers[m];
    config.plimit = spec.plimit;
    config.leaf_threshold = spec.leaf_threshold;

    std::optional<ResultVector> exact;
    if (wants_naive) {
      config.algorithm = Algorithm::Naive;
      exact = run_algorithm(config, qtree, rtree);
    }
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      const Algorithm alg = spec.algorithms[a];
      ReportRow& row = rows[a][m];
      row.algorithm = alg;
      row.multiplier = spec.multipliers[m];
      row.bandwidth = config.bandwidth;
      if (alg == Algorithm::Naive) {
        row.seconds = exact->seconds;
        if (spec.verify) row.max_rel_error = 0.0;
        continue;
      }
      config.algorithm = alg;
      double refresh = 0.0;
      ResultVector result;
      try {
        if (alg == Algorithm::Dito) {
          start = Clock::now();
          rtree.refresh_moments(config.bandwidth, config.effective_plimit(rtree.dim()));
          refresh = since(start);
        }
        result = run_algorithm(config, qtree, rtree);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << algorithm_name(alg) << " at h=" << config.bandwidth << ": " << e.what();
        throw std::runtime_error(msg.str());
      }
      row.seconds = result.seconds + refresh + build_share;
      row.counters = result.counters;
      if (spec.verify) row.max_rel_error = max_relative_error(result.values, exact->values);
    }
  }
  for (auto& per_alg : rows) {
    for (auto& row : per_alg) report.rows.push_back(std::move(row));
  }
  return report;
}

Report run_sweep(const SweepSpec& spec) {
  spec.validate();
  LoadOptions options;
  options.has_weights = spec.weights;
  options.header = spec.header;
  options.rescale = spec.rescale;
  const PointStore refs = load_points(spec.reference_path, options);
  if (spec.query_path) {
    // Query rows never carry weights.
    LoadOptions qopts = options;
    qopts.has_weights = false;
    const PointStore queries = load_points(*spec.query_path, qopts);
    return run_sweep(spec, refs, &queries);
  }
  return run_sweep(spec, refs);
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + name + "'");
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Table:
      emit_table(report, out);
      break;
    case ReportFormat::Csv:
      emit_csv(report, out);
      break;
    case ReportFormat::Json:
      emit_json(report, out);
      break;
  }
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  emit_report(report, format, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace fastgauss
