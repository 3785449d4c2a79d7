#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fastgauss/series.hpp"

namespace fastgauss {

/// Row-major N x D coordinates with positive weights. After a tree is built
/// the rows are in tree order and `permutation()[i]` is the original row of
/// tree row i.
class PointStore {
 public:
  PointStore() = default;
  /// Empty `weights` means unit weights. Throws std::invalid_argument on
  /// shape mismatch or non-positive weights.
  PointStore(std::vector<double> coords, std::size_t dim, std::vector<double> weights = {});

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return weights_.empty(); }

  std::span<const double> coords() const { return coords_; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<const double> weights() const { return weights_; }
  std::span<const std::size_t> permutation() const { return permutation_; }
  double total_weight() const;

  /// Reorders rows so that new row i is old row order[i].
  void reorder(std::span<const std::size_t> order);

 private:
  std::vector<double> coords_;
  std::size_t dim_ = 0;
  std::vector<double> weights_;
  std::vector<std::size_t> permutation_;
};

/// Axis-aligned [lo, hi] per dimension.
struct BoundingBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x) const;
};

/// Non-owning box over a tree's flat storage.
struct BoxView {
  std::span<const double> lo;
  std::span<const double> hi;

  BoxView(std::span<const double> l, std::span<const double> h) : lo(l), hi(h) {}
  BoxView(const BoundingBox& b) : lo(b.lo), hi(b.hi) {}  // NOLINT(implicit)
};

/// Smallest / largest squared distance between any point of `a` and any
/// point of `b`. Throws std::invalid_argument on dimension mismatch.
double min_sq_dist(BoxView a, BoxView b);
double max_sq_dist(BoxView a, BoxView b);

struct TreeNode {
  std::size_t begin = 0;  // point range [begin, end) in tree order
  std::size_t end = 0;
  int left = -1;
  int right = -1;
  double weight_sum = 0.0;
  double max_inf_radius = 0.0;  // max ||x - centroid||_inf, data units

  bool is_leaf() const { return left < 0; }
  std::size_t count() const { return end - begin; }
};

inline constexpr std::size_t kDefaultLeafThreshold = 25;

/// kd-tree over a PointStore: each internal node splits its widest
/// dimension at the midpoint of the contained points' range. Nodes are in
/// pre-order, so children always follow their parent and the root is 0.
///
/// Besides the structure the tree caches per-node far-field moments for one
/// bandwidth at a time (see refresh_moments).
class KdTree {
 public:
  /// Throws std::invalid_argument on empty input or leaf_threshold == 0.
  KdTree(PointStore points, std::size_t leaf_threshold = kDefaultLeafThreshold);

  const PointStore& points() const { return points_; }
  std::size_t dim() const { return points_.dim(); }
  std::size_t leaf_threshold() const { return leaf_threshold_; }

  std::span<const TreeNode> nodes() const { return nodes_; }
  const TreeNode& node(int n) const { return nodes_[static_cast<std::size_t>(n)]; }
  std::size_t node_count() const { return nodes_.size(); }

  BoxView box(int n) const;
  BoundingBox bounding_box(int n) const;
  std::span<const double> centroid(int n) const;
  std::span<const double> node_coords(int n) const;
  std::span<const double> node_weights(int n) const;

  /// Recomputes the order-`plimit` Hermite moments of every node about its
  /// centroid for bandwidth h: leaves directly, internal nodes by H2H of
  /// their children.
  void refresh_moments(double h, int plimit);
  bool has_moments() const { return moment_order_ > 0; }
  double moment_bandwidth() const { return moment_bandwidth_; }
  int moment_order() const { return moment_order_; }
  std::span<const double> moments(int n) const;
  const std::shared_ptr<const ExpansionLayout>& moment_layout() const { return moment_layout_; }

 private:
  int build(std::vector<std::size_t>& index, std::size_t begin, std::size_t end);
  void compute_statistics(int n);

  PointStore points_;
  std::size_t leaf_threshold_;
  std::vector<TreeNode> nodes_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> centroid_;

  std::shared_ptr<const ExpansionLayout> moment_layout_;
  std::vector<double> moments_;
  std::size_t moment_stride_ = 0;
  double moment_bandwidth_ = 0.0;
  int moment_order_ = 0;
};

/// Series truncation limit by dimension: 8 for D <= 2, 6 for D = 3, 4 for
/// D in {4, 5}, 2 for D = 6 and 1 above.
int plimit_for_dimension(std::size_t dim);

/// Mutable query-side accumulators for one traversal over a query tree.
/// Node bounds hold for every query in the node and include contributions
/// recorded at ancestors; `pending_*` are the parts not yet pushed to the
/// children. Per-query arrays are indexed in tree order.
struct QueryState {
  std::vector<double> node_min;
  std::vector<double> node_max;
  std::vector<double> pending_min;
  std::vector<double> pending_max;
  std::vector<double> node_estimate;  // G_Q^est, finite-difference mass
  std::vector<double> tokens;         // W_T
  std::vector<double> local_coeffs;   // node-major, local_stride per node
  std::vector<char> has_local;
  std::size_t local_stride = 0;
  int local_order = 0;

  std::vector<double> query_min;
  std::vector<double> query_max;
  std::vector<double> query_estimate;

  std::span<double> local(int n) {
    return {local_coeffs.data() + static_cast<std::size_t>(n) * local_stride, local_stride};
  }
};

/// Sizes and resets `state` for `qtree`: every lower bound 0, every upper
/// bound `total_weight`, tokens, estimates and local coefficients zero.
/// local_order == 0 allocates no local expansions.
void reset_query_state(QueryState& state, const KdTree& qtree, double total_weight,
                       int local_order = 0);

}  // namespace fastgauss
