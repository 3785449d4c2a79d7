#include "fastgauss/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fastgauss {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Naive: return "naive";
    case Algorithm::Dfd: return "dfd";
    case Algorithm::Dfdo: return "dfdo";
    case Algorithm::Dito: return "dito";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "naive") return Algorithm::Naive;
  if (lower == "dfd") return Algorithm::Dfd;
  if (lower == "dfdo") return Algorithm::Dfdo;
  if (lower == "dito") return Algorithm::Dito;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw std::invalid_argument("bandwidth must be positive");
  if (plimit < 0) throw std::invalid_argument("plimit must be non-negative");
  if (leaf_threshold == 0) throw std::invalid_argument("leaf threshold must be at least 1");
}

int RunConfig::effective_plimit(std::size_t dim) const {
  return plimit > 0 ? plimit : plimit_for_dimension(dim);
}

ResultVector naive_sum(std::span<const double> queries, std::span<const double> references,
                       std::span<const double> weights, std::size_t dim, double h) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  if (queries.size() % dim != 0 || references.size() != weights.size() * dim) {
    throw std::invalid_argument("point arrays do not match the dimension");
  }
  const auto start = Clock::now();
  const GaussianKernel kernel(h);
  const std::size_t m = queries.size() / dim;
  const std::size_t n = weights.size();
  ResultVector out;
  out.values.assign(m, 0.0);
  for (std::size_t q = 0; q < m; ++q) {
    const double* xq = queries.data() + q * dim;
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      sum += weights[r] * kernel(squared_distance(xq, references.data() + r * dim, dim));
    }
    out.values[q] = sum;
  }
  out.lower = out.values;
  out.upper = out.values;
  out.counters.exhaustive_pairs = static_cast<double>(m) * static_cast<double>(n);
  out.seconds = seconds_since(start);
  return out;
}

ResultVector naive_sum(const PointStore& queries, const PointStore& references, double h) {
  if (queries.dim() != references.dim()) throw std::invalid_argument("query/reference dimension mismatch");
  return naive_sum(queries.coords(), references.coords(), references.weights(), queries.dim(), h);
}

bool fd_can_prune(double error, double ref_weight, double epsilon, double total_weight,
                  double g_min) {
  if (error <= 0.0) return true;
  if (!(g_min > 0.0)) return false;
  return error <= epsilon * ref_weight * g_min / total_weight;
}

bool token_update(double& tokens, double ref_weight, double error, double epsilon,
                  double total_weight, double g_min) {
  if (error <= 0.0) {
    tokens += ref_weight;
    return true;
  }
  if (!(g_min > 0.0)) return false;
  if (error > epsilon * (ref_weight + tokens) * g_min / total_weight) return false;
  const double used = total_weight * error / (epsilon * g_min);
  tokens = std::max(0.0, tokens + ref_weight - used);
  return true;
}

DualTreeTraversal::DualTreeTraversal(const RunConfig& config, const KdTree& query_tree,
                                     const KdTree& ref_tree)
    : config_(config),
      qtree_(query_tree),
      rtree_(ref_tree),
      kernel_(config.bandwidth),
      total_weight_(ref_tree.node(0).weight_sum),
      use_tokens_(config.algorithm == Algorithm::Dfdo || config.algorithm == Algorithm::Dito),
      use_series_(config.algorithm == Algorithm::Dito),
      plimit_(config.effective_plimit(query_tree.dim())) {
  config_.validate();
  if (config.algorithm == Algorithm::Naive) {
    throw std::invalid_argument("the naive algorithm does not use a dual-tree traversal");
  }
  if (query_tree.dim() != ref_tree.dim()) throw std::invalid_argument("query/reference dimension mismatch");
  if (use_series_) {
    if (!ref_tree.has_moments() || ref_tree.moment_bandwidth() != config.bandwidth ||
        ref_tree.moment_order() < plimit_) {
      throw std::logic_error("reference moments are missing or stale for this bandwidth");
    }
    series_.emplace(ref_tree.moment_layout());
    bounds_.emplace(static_cast<int>(ref_tree.dim()), plimit_);
  }
  reset_query_state(state_, qtree_, total_weight_, use_series_ ? plimit_ : 0);
  if (config_.audit) {
    const std::size_t m = qtree_.points().size();
    audit_ = AuditLog{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                      std::vector<double>(m, 0.0)};
  }
}

void DualTreeTraversal::run() {
  const auto start = Clock::now();
  traverse(0, 0);
  post_process();
  seconds_ = seconds_since(start);
}

void DualTreeTraversal::traverse(int q, int r) {
  ++counters_.node_pairs;
  const double min_sq = min_sq_dist(qtree_.box(q), rtree_.box(r));
  const double max_sq = max_sq_dist(qtree_.box(q), rtree_.box(r));
  if (config_.allow_pruning && try_prune(q, r, min_sq, max_sq)) return;

  const TreeNode& qn = qtree_.node(q);
  const TreeNode& rn = rtree_.node(r);
  if (qn.is_leaf() && rn.is_leaf()) {
    base_case(q, r);
    return;
  }
  if (qn.is_leaf()) {
    traverse(q, rn.left);
    traverse(q, rn.right);
    return;
  }
  push_down(q);
  if (rn.is_leaf()) {
    traverse(qn.left, r);
    traverse(qn.right, r);
  } else {
    traverse(qn.left, rn.left);
    traverse(qn.left, rn.right);
    traverse(qn.right, rn.left);
    traverse(qn.right, rn.right);
  }
  pull_up(q);
}

bool DualTreeTraversal::try_prune(int q, int r, double min_sq, double max_sq) {
  const TreeNode& qn = qtree_.node(q);
  const TreeNode& rn = rtree_.node(r);
  const double wr = rn.weight_sum;
  const double k_near = kernel_(min_sq);
  const double k_far = kernel_(max_sq);
  const double dl = wr * k_far;
  const double du = wr * k_near - wr;
  const double fd_error = 0.5 * wr * (k_near - k_far);
  const double g_min = state_.node_min[static_cast<std::size_t>(q)];
  double& tokens = state_.tokens[static_cast<std::size_t>(q)];
  const double pairs = static_cast<double>(qn.count()) * static_cast<double>(rn.count());

  const bool fd_ok =
      use_tokens_ ? token_update(tokens, wr, fd_error, config_.epsilon, total_weight_, g_min)
                  : fd_can_prune(fd_error, wr, config_.epsilon, total_weight_, g_min);
  if (fd_ok) {
    if (audit_) audit_prune(q, wr, fd_error, g_min);
    apply_bounds(q, dl, du);
    state_.node_estimate[static_cast<std::size_t>(q)] += 0.5 * (dl + du + wr);
    ++counters_.fd_prunes;
    counters_.pruned_pairs += pairs;
    return true;
  }
  if (!use_series_ || !(g_min > 0.0)) return false;

  const double h = config_.bandwidth;
  NodePairGeometry geom;
  geom.min_sq_dist = min_sq;
  geom.max_sq_dist = max_sq;
  geom.ref_radius = rn.max_inf_radius / h;
  geom.query_radius = qn.max_inf_radius / h;
  geom.ref_weight = wr;
  geom.query_count = qn.count();
  geom.ref_count = rn.count();
  geom.dim = static_cast<int>(qtree_.dim());
  geom.bandwidth = h;
  const double maxerr = config_.epsilon * (wr + tokens) * g_min / total_weight_;
  const MethodChoice choice = best_method(geom, maxerr, *bounds_);

  switch (choice.method) {
    case ApproximationMethod::DirectHermite: {
      const auto moments = rtree_.moments(r);
      const auto center = rtree_.centroid(r);
      for (std::size_t i = qn.begin; i < qn.end; ++i) {
        state_.query_estimate[i] +=
            series_->eval_far_field(moments, choice.order, center, h, qtree_.points().point(i));
      }
      ++counters_.dh_prunes;
      break;
    }
    case ApproximationMethod::DirectLocal:
      series_->accumulate_local(rtree_.node_coords(r), rtree_.node_weights(r),
                                qtree_.centroid(q), h, choice.order, state_.local(q));
      state_.has_local[static_cast<std::size_t>(q)] = 1;
      ++counters_.dl_prunes;
      break;
    case ApproximationMethod::HermiteToLocal:
      series_->h2l(rtree_.moments(r), choice.order, rtree_.centroid(r), qtree_.centroid(q), h,
                   choice.order, state_.local(q));
      state_.has_local[static_cast<std::size_t>(q)] = 1;
      ++counters_.h2l_prunes;
      break;
    default:
      return false;
  }
  const double used = total_weight_ * choice.bound / (config_.epsilon * g_min);
  tokens = std::max(0.0, tokens + wr - used);
  if (audit_) audit_prune(q, wr, choice.bound, g_min);
  apply_bounds(q, dl, du);
  counters_.pruned_pairs += pairs;
  return true;
}

void DualTreeTraversal::apply_bounds(int q, double dl, double du) {
  const auto i = static_cast<std::size_t>(q);
  state_.node_min[i] += dl;
  state_.node_max[i] += du;
  state_.pending_min[i] += dl;
  state_.pending_max[i] += du;
}

void DualTreeTraversal::push_down(int q) {
  const auto i = static_cast<std::size_t>(q);
  const TreeNode& qn = qtree_.node(q);
  const double dmin = state_.pending_min[i];
  const double dmax = state_.pending_max[i];
  const double tok = state_.tokens[i];
  if (dmin == 0.0 && dmax == 0.0 && tok == 0.0) return;
  for (int c : {qn.left, qn.right}) {
    const auto k = static_cast<std::size_t>(c);
    state_.node_min[k] += dmin;
    state_.node_max[k] += dmax;
    state_.pending_min[k] += dmin;
    state_.pending_max[k] += dmax;
    state_.tokens[k] += tok;
  }
  state_.pending_min[i] = 0.0;
  state_.pending_max[i] = 0.0;
  state_.tokens[i] = 0.0;
}

void DualTreeTraversal::pull_up(int q) {
  const auto i = static_cast<std::size_t>(q);
  const TreeNode& qn = qtree_.node(q);
  const auto l = static_cast<std::size_t>(qn.left);
  const auto r = static_cast<std::size_t>(qn.right);
  state_.node_min[i] = std::min(state_.node_min[l], state_.node_min[r]);
  state_.node_max[i] = std::max(state_.node_max[l], state_.node_max[r]);
  const double common = std::min(state_.tokens[l], state_.tokens[r]);
  state_.tokens[i] = common;
  state_.tokens[l] -= common;
  state_.tokens[r] -= common;
}

void DualTreeTraversal::flush_leaf(int q) {
  const auto i = static_cast<std::size_t>(q);
  const double dmin = state_.pending_min[i];
  const double dmax = state_.pending_max[i];
  if (dmin == 0.0 && dmax == 0.0) return;
  const TreeNode& qn = qtree_.node(q);
  for (std::size_t k = qn.begin; k < qn.end; ++k) {
    state_.query_min[k] += dmin;
    state_.query_max[k] += dmax;
  }
  state_.pending_min[i] = 0.0;
  state_.pending_max[i] = 0.0;
}

void DualTreeTraversal::base_case(int q, int r) {
  ++counters_.base_cases;
  flush_leaf(q);
  const TreeNode& qn = qtree_.node(q);
  const TreeNode& rn = rtree_.node(r);
  const std::size_t dim = qtree_.dim();
  const double* rc = rtree_.points().coords().data();
  const double* rw = rtree_.points().weights().data();
  const double wr = rn.weight_sum;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t k = qn.begin; k < qn.end; ++k) {
    const double* xq = qtree_.points().coords().data() + k * dim;
    double sum = 0.0;
    for (std::size_t j = rn.begin; j < rn.end; ++j) {
      sum += rw[j] * kernel_(squared_distance(xq, rc + j * dim, dim));
    }
    state_.query_min[k] += sum;
    state_.query_max[k] += sum - wr;
    state_.query_estimate[k] += sum;
    lo = std::min(lo, state_.query_min[k]);
    hi = std::max(hi, state_.query_max[k]);
  }
  const auto i = static_cast<std::size_t>(q);
  if (use_tokens_) state_.tokens[i] += wr;
  state_.node_min[i] = lo;
  state_.node_max[i] = hi;
  counters_.exhaustive_pairs += static_cast<double>(qn.count()) * static_cast<double>(rn.count());
  if (audit_) {
    for (std::size_t k = qn.begin; k < qn.end; ++k) audit_->accounted_weight[k] += wr;
  }
}

void DualTreeTraversal::audit_prune(int q, double ref_weight, double error, double g_min) {
  const TreeNode& qn = qtree_.node(q);
  const double allowance =
      error > 0.0 ? total_weight_ * error / (config_.epsilon * g_min) : 0.0;
  for (std::size_t k = qn.begin; k < qn.end; ++k) {
    audit_->accounted_weight[k] += ref_weight;
    audit_->spent_error[k] += error;
    audit_->spent_allowance[k] += allowance;
  }
}

void DualTreeTraversal::post_process() { post_node(0); }

void DualTreeTraversal::post_node(int q) {
  const auto i = static_cast<std::size_t>(q);
  const TreeNode& qn = qtree_.node(q);
  if (qn.is_leaf()) {
    flush_leaf(q);
    const double est = state_.node_estimate[i];
    const bool local = state_.has_local[i] != 0;
    for (std::size_t k = qn.begin; k < qn.end; ++k) {
      double v = est;
      if (local) {
        v += series_->eval_local(state_.local(q), state_.local_order, qtree_.centroid(q),
                                 config_.bandwidth, qtree_.points().point(k));
      }
      state_.query_estimate[k] += v;
    }
    state_.node_estimate[i] = 0.0;
    return;
  }
  push_down(q);
  for (int c : {qn.left, qn.right}) {
    const auto k = static_cast<std::size_t>(c);
    state_.node_estimate[k] += state_.node_estimate[i];
    if (state_.has_local[i]) {
      series_->l2l(state_.local(q), state_.local_order, qtree_.centroid(q), qtree_.centroid(c),
                   config_.bandwidth, state_.local(c));
      state_.has_local[k] = 1;
    }
  }
  state_.node_estimate[i] = 0.0;
  if (state_.has_local[i]) {
    auto coeffs = state_.local(q);
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    state_.has_local[i] = 0;
  }
  post_node(qn.left);
  post_node(qn.right);
}

ResultVector DualTreeTraversal::result() const {
  const auto perm = qtree_.points().permutation();
  const std::size_t m = perm.size();
  ResultVector out;
  out.values.assign(m, 0.0);
  out.lower.assign(m, 0.0);
  out.upper.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    out.values[perm[k]] = state_.query_estimate[k];
    out.lower[perm[k]] = state_.query_min[k];
    out.upper[perm[k]] = state_.query_max[k];
  }
  if (audit_) {
    AuditLog log{std::vector<double>(m), std::vector<double>(m), std::vector<double>(m)};
    for (std::size_t k = 0; k < m; ++k) {
      log.accounted_weight[perm[k]] = audit_->accounted_weight[k];
      log.spent_error[perm[k]] = audit_->spent_error[k];
      log.spent_allowance[perm[k]] = audit_->spent_allowance[k];
    }
    out.audit = std::move(log);
  }
  out.seconds = seconds_;
  out.counters = counters_;
  return out;
}

namespace {

ResultVector run_with(Algorithm algorithm, const RunConfig& config, const KdTree& query_tree,
                      const KdTree& ref_tree) {
  RunConfig c = config;
  c.algorithm = algorithm;
  DualTreeTraversal traversal(c, query_tree, ref_tree);
  traversal.run();
  return traversal.result();
}

}  // namespace

ResultVector dfd_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree) {
  return run_with(Algorithm::Dfd, config, query_tree, ref_tree);
}

ResultVector dfdo_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree) {
  return run_with(Algorithm::Dfdo, config, query_tree, ref_tree);
}

ResultVector dito_run(const RunConfig& config, const KdTree& query_tree, const KdTree& ref_tree) {
  return run_with(Algorithm::Dito, config, query_tree, ref_tree);
}

ResultVector run_algorithm(const RunConfig& config, const KdTree& query_tree,
                           const KdTree& ref_tree) {
  if (config.algorithm != Algorithm::Naive) {
    return run_with(config.algorithm, config, query_tree, ref_tree);
  }
  config.validate();
  ResultVector tree_order = naive_sum(query_tree.points(), ref_tree.points(), config.bandwidth);
  const auto perm = query_tree.points().permutation();
  ResultVector out = tree_order;
  for (std::size_t k = 0; k < perm.size(); ++k) out.values[perm[k]] = tree_order.values[k];
  out.lower = out.values;
  out.upper = out.values;
  return out;
}

}  // namespace fastgauss
