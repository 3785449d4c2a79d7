#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace fastgauss {

enum class ApproximationMethod {
  Exhaustive,
  FiniteDifference,
  DirectHermite,
  DirectLocal,
  HermiteToLocal,
};

const char* method_name(ApproximationMethod method);

/// Outcome of the cost-based selector. order == 0 means "no order"
/// (exhaustive); an exhaustive choice carries bound 0 and the direct cost.
struct MethodChoice {
  ApproximationMethod method = ApproximationMethod::Exhaustive;
  int order = 0;
  double bound = 0.0;
  double cost = 0.0;
};

/// Everything the truncation bounds need to know about a (query, reference)
/// node pair. Radii are already divided by the bandwidth.
struct NodePairGeometry {
  double min_sq_dist = 0.0;  // (delta_QR^min)^2
  double max_sq_dist = 0.0;  // (delta_QR^max)^2
  double ref_radius = 0.0;   // r_R = max ||x_r - x_R||_inf / h
  double query_radius = 0.0; // r_Q = max ||x_q - x_Q||_inf / h
  double ref_weight = 0.0;   // W_R
  std::size_t query_count = 0;
  std::size_t ref_count = 0;
  int dim = 1;
  double bandwidth = 1.0;
};

/// W_R (K(delta_min) - K(delta_max)) / 2.
double bound_fd(const NodePairGeometry& geom);

/// Truncated direct Hermite evaluation, order p:
///   W_R e^{-dmin^2/4h^2} C(D+p-1, D-1) r_R^p / sqrt(floor(p/D)!^(D-p') ceil(p/D)!^p').
double bound_dh(int p, const NodePairGeometry& geom);

/// Same form as bound_dh with r_Q in place of r_R.
double bound_dl(int p, const NodePairGeometry& geom);

/// W_R (|E1| + |E2|) where |E2| is the DL-shaped term in r_Q and
///   |E1| = [DH-shaped term in sqrt(2) r_R] * C(D+p-1, D) * (sqrt(2) r_Q)^I,
/// I = 0 when sqrt(2) r_Q <= 1 and p - 1 otherwise.
double bound_h2l(int p, const NodePairGeometry& geom);

/// Per-dimension constants C(D+p-1, D-1) / sqrt(floor(p/D)!^(D-p') ceil(p/D)!^p')
/// and C(D+p-1, D) for p = 1 .. max_order, so the selector can scan orders
/// without recomputing factorial products.
class BoundTable {
 public:
  BoundTable(int dim, int max_order);

  int dim() const { return dim_; }
  int max_order() const { return max_order_; }
  double remainder_factor(int p) const { return remainder_[static_cast<std::size_t>(p)]; }
  double term_count(int p) const { return terms_[static_cast<std::size_t>(p)]; }

 private:
  int dim_;
  int max_order_;
  std::vector<double> remainder_;
  std::vector<double> terms_;
};

/// Cheapest method whose bound fits `maxerr`, scanning 1 <= p <= plimit for
/// each series method. Costs: DH N_Q D^(p+1), DL N_R D^(p+1), H2L D^(2p+1),
/// exhaustive D N_Q N_R. Infeasible methods cost +infinity; ties resolve in
/// the order DH, DL, H2L, exhaustive.
MethodChoice best_method(const NodePairGeometry& geom, double maxerr, int plimit);
MethodChoice best_method(const NodePairGeometry& geom, double maxerr, const BoundTable& table);

}  // namespace fastgauss
