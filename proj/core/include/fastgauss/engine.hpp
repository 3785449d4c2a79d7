#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fastgauss/error_bounds.hpp"
#include "fastgauss/kernel.hpp"
#include "fastgauss/series.hpp"
#include "fastgauss/tree.hpp"

namespace fastgauss {

enum class Algorithm { Naive, Dfd, Dfdo, Dito };

const char* algorithm_name(Algorithm algorithm);
/// Accepts "naive", "dfd", "dfdo", "dito" (case-insensitive).
Algorithm parse_algorithm(std::string_view name);

struct RunConfig {
  double epsilon = 0.01;
  double bandwidth = 1.0;
  Algorithm algorithm = Algorithm::Dito;
  int plimit = 0;  // 0 selects plimit_for_dimension
  std::size_t leaf_threshold = kDefaultLeafThreshold;
  bool allow_pruning = true;
  /// Records the per-query accounting ledger (costs O(N_Q) per prune).
  bool audit = false;

  void validate() const;
  int effective_plimit(std::size_t dim) const;
};

struct Counters {
  std::size_t node_pairs = 0;
  std::size_t base_cases = 0;
  std::size_t fd_prunes = 0;
  std::size_t dh_prunes = 0;
  std::size_t dl_prunes = 0;
  std::size_t h2l_prunes = 0;
  double pruned_pairs = 0.0;      // sum of N_Q * N_R over prunes
  double exhaustive_pairs = 0.0;  // kernel evaluations in base cases

  std::size_t prunes() const { return fd_prunes + dh_prunes + dl_prunes + h2l_prunes; }
  std::size_t series_prunes() const { return dh_prunes + dl_prunes + h2l_prunes; }
};

/// Per-query ledger (original query order) kept when RunConfig::audit is set.
struct AuditLog {
  std::vector<double> accounted_weight;  // sum of W_R over every pair covering the query
  std::vector<double> spent_error;       // sum of E_A over its prunes
  std::vector<double> spent_allowance;   // sum of W E_A / (eps G_Q^min)
};

struct ResultVector {
  std::vector<double> values;  // original query order
  std::vector<double> lower;   // final per-query lower bounds (dual-tree only)
  std::vector<double> upper;
  double seconds = 0.0;
  Counters counters;
  std::optional<AuditLog> audit;
};

/// Exhaustive G(x_q) = sum_r w_r exp(-|x_q - x_r|^2 / 2h^2).
ResultVector naive_sum(std::span<const double> queries, std::span<const double> references,
                       std::span<const double> weights, std::size_t dim, double h);
ResultVector naive_sum(const PointStore& queries, const PointStore& references, double h);

/// Plain finite-difference rule: E <= eps W_R G_min / W (E == 0 always
/// passes, G_min == 0 with E > 0 never does).
bool fd_can_prune(double error, double ref_weight, double epsilon, double total_weight,
                  double g_min);

/// Token rule: prune when E <= eps (W_R + tokens) G_min / W. On success the
/// node balance moves by W_R - W E / (eps G_min): a credit when the prune
/// was cheaper than its own allowance, a debit otherwise.
bool token_update(double& tokens, double ref_weight, double error, double epsilon,
                  double total_weight, double g_min);

/// One dual-tree pass of DFD, DFDO or DITO over (query tree, reference tree).
/// Owns the query-side state; the reference tree is only read. For DITO the
/// reference tree must carry moments for the run's bandwidth.
class DualTreeTraversal {
 public:
  DualTreeTraversal(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree);

  /// Full run: traverse from the roots, then post-process.
  void run();

  void traverse(int q, int r);
  /// Exhaustive leaf-leaf interaction; credits W_R to the query node's tokens.
  void base_case(int q, int r);
  /// Pushes node estimates and local expansions down to the queries.
  void post_process();

  QueryState& state() { return state_; }
  const QueryState& state() const { return state_; }
  const Counters& counters() const { return counters_; }

  /// Values in original query order; valid after post_process().
  ResultVector result() const;

 private:
  bool try_prune(int q, int r, double min_sq, double max_sq);
  void apply_bounds(int q, double dl, double du);
  void push_down(int q);
  void pull_up(int q);
  void flush_leaf(int q);
  void post_node(int q);
  void audit_prune(int q, double ref_weight, double error, double g_min);

  RunConfig config_;
  const KdTree& qtree_;
  const KdTree& rtree_;
  GaussianKernel kernel_;
  double total_weight_;
  bool use_tokens_;
  bool use_series_;
  int plimit_;
  std::optional<SeriesEvaluator> series_;
  std::optional<BoundTable> bounds_;
  QueryState state_;
  Counters counters_;
  std::optional<AuditLog> audit_;  // tree order while running
  double seconds_ = 0.0;
};

ResultVector dfd_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree);
ResultVector dfdo_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree);
ResultVector dito_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree);

/// Dispatches on config.algorithm; Naive runs the exhaustive sum over the
/// trees' points.
ResultVector run_algorithm(const RunConfig& config, const KdTree& query_tree,
                           const KdTree& ref_tree);

}  // namespace fastgauss
