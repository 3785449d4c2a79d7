#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fastgauss/multi_index.hpp"

namespace fastgauss {

/// Index bookkeeping shared by all expansions of one (dimension, max order):
/// the graded-lex term set, the doubled-order set needed for h_{alpha+beta}
/// lookups, and the alpha + beta -> index table.
class ExpansionLayout {
 public:
  ExpansionLayout(int dim, int max_order);

  int dim() const { return terms_->dim(); }
  int max_order() const { return terms_->order(); }
  const MultiIndexSet& terms() const { return *terms_; }
  const MultiIndexSet& extended() const { return *extended_; }

  /// Number of coefficients of an order-p expansion.
  std::size_t size(int order) const { return terms_->count_below(order); }

  /// Position of alpha_i + alpha_j in extended(); i, j < size(max_order).
  std::size_t sum_index(std::size_t i, std::size_t j) const {
    return sum_[i * terms_->size() + j];
  }

 private:
  std::shared_ptr<const MultiIndexSet> terms_;
  std::shared_ptr<const MultiIndexSet> extended_;
  std::vector<std::uint32_t> sum_;
};

std::shared_ptr<const ExpansionLayout> shared_expansion_layout(int dim, int max_order);

/// Raw expansion kernels over flat coefficient spans laid out by an
/// ExpansionLayout. All orders must satisfy 1 <= order <= layout max order;
/// coefficient spans must hold at least layout.size(order) entries.
/// Accumulating operations add into their output.
///
/// Holds scratch buffers, so one instance must not be shared between
/// threads; the layout it points to may be.
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(std::shared_ptr<const ExpansionLayout> layout);

  const ExpansionLayout& layout() const { return *layout_; }

  /// A_alpha += sum_r (w_r / alpha!) ((x_r - center) / sqrt(2h^2))^alpha.
  void accumulate_far_field(std::span<const double> coords, std::span<const double> weights,
                            std::span<const double> center, double h, int order,
                            std::span<double> coeffs);

  /// sum_{|alpha| < order} A_alpha h_alpha((x - center) / sqrt(2h^2)).
  double eval_far_field(std::span<const double> coeffs, int order,
                        std::span<const double> center, double h, std::span<const double> x);

  /// B_beta += sum_r (w_r / beta!) h_beta((x_r - center) / sqrt(2h^2)).
  void accumulate_local(std::span<const double> coords, std::span<const double> weights,
                        std::span<const double> center, double h, int order,
                        std::span<double> coeffs);

  /// sum_{|beta| < order} B_beta ((x - center) / sqrt(2h^2))^beta.
  double eval_local(std::span<const double> coeffs, int order, std::span<const double> center,
                    double h, std::span<const double> x);

  /// Re-centres far-field moments from child_center onto parent_center and
  /// adds them into `parent`.
  void h2h(std::span<const double> child, int order, std::span<const double> child_center,
           std::span<const double> parent_center, double h, std::span<double> parent);

  /// Converts the far-field terms |alpha| < far_order about far_center into
  /// Taylor coefficients |beta| < local_order about local_center and adds
  /// them into `local`.
  void h2l(std::span<const double> far, int far_order, std::span<const double> far_center,
           std::span<const double> local_center, double h, int local_order,
           std::span<double> local);

  /// Shifts a local expansion from old_center to new_center, adding into `out`.
  void l2l(std::span<const double> local, int order, std::span<const double> old_center,
           std::span<const double> new_center, double h, std::span<double> out);

 private:
  void scale_displacement(std::span<const double> x, std::span<const double> center, double h);
  // Fills basis_[0..count) with prod_d t_d^alpha_d over `set`.
  void fill_monomials(const MultiIndexSet& set, std::size_t count, int order);
  // Fills basis_[0..count) with prod_d H_alpha_d(t_d); returns exp(-|t|^2).
  double fill_hermite(const MultiIndexSet& set, std::size_t count, int order);

  std::shared_ptr<const ExpansionLayout> layout_;
  std::vector<double> t_;
  std::vector<double> ladder_;
  std::vector<double> basis_;
  std::vector<double> accum_;
};

/// Far-field (Hermite) expansion about a reference centroid.
struct FarFieldExpansion {
  std::vector<double> center;
  int order = 0;
  double bandwidth = 0.0;
  std::vector<double> coeffs;
};

/// Local (Taylor) expansion about a query centroid.
struct LocalExpansion {
  std::vector<double> center;
  int order = 0;
  double bandwidth = 0.0;
  std::vector<double> coeffs;
};

/// Points are row-major with dim = center.size(). Throws
/// std::invalid_argument on bad order, shape mismatch or non-positive weights.
FarFieldExpansion accumulate_far_field(std::span<const double> coords,
                                       std::span<const double> weights,
                                       std::span<const double> center, int order, double h);
double eval_far_field(const FarFieldExpansion& expansion, std::span<const double> x);

LocalExpansion accumulate_local_direct(std::span<const double> coords,
                                       std::span<const double> weights,
                                       std::span<const double> center, int order, double h);
double eval_local(const LocalExpansion& expansion, std::span<const double> x);

FarFieldExpansion translate_h2h(const FarFieldExpansion& child, std::span<const double> new_center);
/// parent += H2H(child); throws std::invalid_argument when order, bandwidth
/// or dimension differ.
void accumulate_h2h(FarFieldExpansion& parent, const FarFieldExpansion& child);
LocalExpansion translate_h2l(const FarFieldExpansion& source, std::span<const double> dest_center,
                             int dest_order);
LocalExpansion translate_l2l(const LocalExpansion& source, std::span<const double> new_center);
/// dest += L2L(source) re-centred on dest.center; throws on mismatch.
void accumulate_l2l(LocalExpansion& dest, const LocalExpansion& source);

}  // namespace fastgauss
