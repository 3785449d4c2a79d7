#include "fastgauss/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fastgauss {

PointStore::PointStore(std::vector<double> coords, std::size_t dim, std::vector<double> weights)
    : coords_(std::move(coords)), dim_(dim), weights_(std::move(weights)) {
  if (dim_ == 0) throw std::invalid_argument("point dimension must be positive");
  if (coords_.size() % dim_ != 0) throw std::invalid_argument("coordinate count is not a multiple of dim");
  const std::size_t n = coords_.size() / dim_;
  if (weights_.empty()) {
    weights_.assign(n, 1.0);
  } else if (weights_.size() != n) {
    throw std::invalid_argument("weight count does not match point count");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("weights must be positive");
  }
  permutation_.resize(n);
  std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
}

double PointStore::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void PointStore::reorder(std::span<const std::size_t> order) {
  if (order.size() != size()) throw std::invalid_argument("reorder size mismatch");
  std::vector<double> coords(coords_.size());
  std::vector<double> weights(weights_.size());
  std::vector<std::size_t> perm(permutation_.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t src = order[i];
    std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(src * dim_), dim_,
                coords.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    weights[i] = weights_[src];
    perm[i] = permutation_[src];
  }
  coords_ = std::move(coords);
  weights_ = std::move(weights);
  permutation_ = std::move(perm);
}

bool BoundingBox::contains(std::span<const double> x) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] < lo[d] || x[d] > hi[d]) return false;
  }
  return true;
}

double min_sq_dist(BoxView a, BoxView b) {
  if (a.lo.size() != b.lo.size()) throw std::invalid_argument("box dimension mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < a.lo.size(); ++d) {
    const double gap = std::max({0.0, b.lo[d] - a.hi[d], a.lo[d] - b.hi[d]});
    s += gap * gap;
  }
  return s;
}

double max_sq_dist(BoxView a, BoxView b) {
  if (a.lo.size() != b.lo.size()) throw std::invalid_argument("box dimension mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < a.lo.size(); ++d) {
    const double span = std::max(a.hi[d] - b.lo[d], b.hi[d] - a.lo[d]);
    s += span * span;
  }
  return s;
}

KdTree::KdTree(PointStore points, std::size_t leaf_threshold)
    : points_(std::move(points)), leaf_threshold_(leaf_threshold) {
  if (points_.empty()) throw std::invalid_argument("cannot build a tree over no points");
  if (leaf_threshold_ == 0) throw std::invalid_argument("leaf threshold must be at least 1");
  std::vector<std::size_t> index(points_.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  build(index, 0, index.size());
  points_.reorder(index);

  const std::size_t dim = points_.dim();
  lo_.assign(nodes_.size() * dim, 0.0);
  hi_.assign(nodes_.size() * dim, 0.0);
  centroid_.assign(nodes_.size() * dim, 0.0);
  for (std::size_t n = 0; n < nodes_.size(); ++n) compute_statistics(static_cast<int>(n));
}

int KdTree::build(std::vector<std::size_t>& index, std::size_t begin, std::size_t end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(TreeNode{begin, end});
  if (end - begin <= leaf_threshold_) return id;

  const std::size_t dim = points_.dim();
  const auto coords = points_.coords();
  std::size_t split_dim = 0;
  double best_range = 0.0;
  double split_lo = 0.0, split_hi = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = coords[index[begin] * dim + d];
    double hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      const double v = coords[index[i] * dim + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_range) {
      best_range = hi - lo;
      split_dim = d;
      split_lo = lo;
      split_hi = hi;
    }
  }
  if (best_range == 0.0) return id;  // all points coincide

  auto key = [&](std::size_t i) { return coords[i * dim + split_dim]; };
  const double mid = split_lo + 0.5 * (split_hi - split_lo);
  auto first = index.begin() + static_cast<std::ptrdiff_t>(begin);
  auto last = index.begin() + static_cast<std::ptrdiff_t>(end);
  auto cut = std::partition(first, last, [&](std::size_t i) { return key(i) < mid; });
  if (cut == first || cut == last) {
    cut = first + (last - first) / 2;
    std::nth_element(first, cut, last, [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  }
  const auto split = static_cast<std::size_t>(cut - index.begin());

  const int left = build(index, begin, split);
  const int right = build(index, split, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

void KdTree::compute_statistics(int n) {
  TreeNode& node = nodes_[static_cast<std::size_t>(n)];
  const std::size_t dim = points_.dim();
  double* lo = lo_.data() + static_cast<std::size_t>(n) * dim;
  double* hi = hi_.data() + static_cast<std::size_t>(n) * dim;
  double* c = centroid_.data() + static_cast<std::size_t>(n) * dim;
  const auto first = points_.point(node.begin);
  std::copy(first.begin(), first.end(), lo);
  std::copy(first.begin(), first.end(), hi);
  std::fill(c, c + dim, 0.0);
  double wsum = 0.0;
  for (std::size_t i = node.begin; i < node.end; ++i) {
    const auto x = points_.point(i);
    for (std::size_t d = 0; d < dim; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
      c[d] += x[d];
    }
    wsum += points_.weights()[i];
  }
  const double inv = 1.0 / static_cast<double>(node.count());
  for (std::size_t d = 0; d < dim; ++d) c[d] *= inv;
  // Rounding in the mean can land a hair outside a degenerate box.
  for (std::size_t d = 0; d < dim; ++d) c[d] = std::clamp(c[d], lo[d], hi[d]);
  double radius = 0.0;
  for (std::size_t i = node.begin; i < node.end; ++i) {
    const auto x = points_.point(i);
    for (std::size_t d = 0; d < dim; ++d) radius = std::max(radius, std::abs(x[d] - c[d]));
  }
  node.weight_sum = wsum;
  node.max_inf_radius = radius;
}

BoxView KdTree::box(int n) const {
  const std::size_t dim = points_.dim();
  const std::size_t off = static_cast<std::size_t>(n) * dim;
  return BoxView({lo_.data() + off, dim}, {hi_.data() + off, dim});
}

BoundingBox KdTree::bounding_box(int n) const {
  const auto b = box(n);
  return BoundingBox{{b.lo.begin(), b.lo.end()}, {b.hi.begin(), b.hi.end()}};
}

std::span<const double> KdTree::centroid(int n) const {
  const std::size_t dim = points_.dim();
  return {centroid_.data() + static_cast<std::size_t>(n) * dim, dim};
}

std::span<const double> KdTree::node_coords(int n) const {
  const TreeNode& nd = node(n);
  const std::size_t dim = points_.dim();
  return points_.coords().subspan(nd.begin * dim, nd.count() * dim);
}

std::span<const double> KdTree::node_weights(int n) const {
  const TreeNode& nd = node(n);
  return points_.weights().subspan(nd.begin, nd.count());
}

void KdTree::refresh_moments(double h, int plimit) {
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (plimit < 1) throw std::invalid_argument("moment order must be at least 1");
  moment_layout_ = shared_expansion_layout(static_cast<int>(dim()), plimit);
  moment_stride_ = moment_layout_->size(plimit);
  moments_.assign(nodes_.size() * moment_stride_, 0.0);
  SeriesEvaluator ev(moment_layout_);
  for (std::size_t k = nodes_.size(); k-- > 0;) {
    const int n = static_cast<int>(k);
    std::span<double> out(moments_.data() + k * moment_stride_, moment_stride_);
    const TreeNode& nd = nodes_[k];
    if (nd.is_leaf()) {
      ev.accumulate_far_field(node_coords(n), node_weights(n), centroid(n), h, plimit, out);
    } else {
      ev.h2h(moments(nd.left), plimit, centroid(nd.left), centroid(n), h, out);
      ev.h2h(moments(nd.right), plimit, centroid(nd.right), centroid(n), h, out);
    }
  }
  moment_bandwidth_ = h;
  moment_order_ = plimit;
}

std::span<const double> KdTree::moments(int n) const {
  return {moments_.data() + static_cast<std::size_t>(n) * moment_stride_, moment_stride_};
}

int plimit_for_dimension(std::size_t dim) {
  if (dim <= 2) return 8;
  if (dim == 3) return 6;
  if (dim <= 5) return 4;
  if (dim == 6) return 2;
  return 1;
}

void reset_query_state(QueryState& state, const KdTree& qtree, double total_weight,
                       int local_order) {
  const std::size_t nodes = qtree.node_count();
  const std::size_t queries = qtree.points().size();
  state.node_min.assign(nodes, 0.0);
  state.node_max.assign(nodes, total_weight);
  state.pending_min.assign(nodes, 0.0);
  state.pending_max.assign(nodes, 0.0);
  state.node_estimate.assign(nodes, 0.0);
  state.tokens.assign(nodes, 0.0);
  state.local_order = local_order;
  state.local_stride =
      local_order > 0 ? multi_index_count(static_cast<int>(qtree.dim()), local_order) : 0;
  state.local_coeffs.assign(nodes * state.local_stride, 0.0);
  state.has_local.assign(nodes, 0);
  state.query_min.assign(queries, 0.0);
  state.query_max.assign(queries, total_weight);
  state.query_estimate.assign(queries, 0.0);
}

}  // namespace fastgauss
