#include "fastgauss/error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fastgauss/combinatorics.hpp"
#include "fastgauss/kernel.hpp"

namespace fastgauss {

const char* method_name(ApproximationMethod method) {
  switch (method) {
    case ApproximationMethod::Exhaustive: return "EX";
    case ApproximationMethod::FiniteDifference: return "FD";
    case ApproximationMethod::DirectHermite: return "DH";
    case ApproximationMethod::DirectLocal: return "DL";
    case ApproximationMethod::HermiteToLocal: return "H2L";
  }
  return "?";
}

namespace {

double remainder_factor(int dim, int p) {
  const int q = p / dim;
  const int extra = p % dim;
  // min over |alpha| = p of alpha! is attained by the most balanced split.
  const double min_fact = std::pow(factorial(q), dim - extra) * std::pow(factorial(q + 1), extra);
  return binomial(dim + p - 1, dim - 1) / std::sqrt(min_fact);
}

double far_decay(const NodePairGeometry& geom) {
  return std::exp(-geom.min_sq_dist / (4.0 * geom.bandwidth * geom.bandwidth));
}

double h2l_bound(double factor, double terms, int p, double decay, const NodePairGeometry& geom) {
  const double s2rq = std::sqrt(2.0) * geom.query_radius;
  const double e2 = factor * std::pow(geom.query_radius, p);
  const double e1 = factor * std::pow(std::sqrt(2.0) * geom.ref_radius, p) * terms *
                    (s2rq <= 1.0 ? 1.0 : std::pow(s2rq, p - 1));
  return geom.ref_weight * decay * (e1 + e2);
}

void check_order(int p) {
  if (p < 1) throw std::invalid_argument("truncation order must be at least 1");
}

}  // namespace

double bound_fd(const NodePairGeometry& geom) {
  const double kmax = gaussian_kernel(geom.min_sq_dist, geom.bandwidth);
  const double kmin = gaussian_kernel(geom.max_sq_dist, geom.bandwidth);
  return geom.ref_weight * (kmax - kmin) / 2.0;
}

double bound_dh(int p, const NodePairGeometry& geom) {
  check_order(p);
  return geom.ref_weight * far_decay(geom) * remainder_factor(geom.dim, p) *
         std::pow(geom.ref_radius, p);
}

double bound_dl(int p, const NodePairGeometry& geom) {
  check_order(p);
  return geom.ref_weight * far_decay(geom) * remainder_factor(geom.dim, p) *
         std::pow(geom.query_radius, p);
}

double bound_h2l(int p, const NodePairGeometry& geom) {
  check_order(p);
  return h2l_bound(remainder_factor(geom.dim, p), binomial(geom.dim + p - 1, geom.dim), p,
                   far_decay(geom), geom);
}

BoundTable::BoundTable(int dim, int max_order)
    : dim_(dim), max_order_(max_order),
      remainder_(static_cast<std::size_t>(max_order) + 1, 0.0),
      terms_(static_cast<std::size_t>(max_order) + 1, 0.0) {
  if (dim < 1 || max_order < 1) throw std::invalid_argument("bound table needs dim, order >= 1");
  for (int p = 1; p <= max_order; ++p) {
    remainder_[static_cast<std::size_t>(p)] = fastgauss::remainder_factor(dim, p);
    terms_[static_cast<std::size_t>(p)] = binomial(dim + p - 1, dim);
  }
}

MethodChoice best_method(const NodePairGeometry& geom, double maxerr, int plimit) {
  return best_method(geom, maxerr, BoundTable(geom.dim, plimit));
}

MethodChoice best_method(const NodePairGeometry& geom, double maxerr, const BoundTable& table) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double dim = geom.dim;
  const double decay = far_decay(geom);
  const double scale = geom.ref_weight * decay;

  int p_dh = 0, p_dl = 0, p_h2l = 0;
  double e_dh = inf, e_dl = inf, e_h2l = inf;
  double rr_pow = 1.0, rq_pow = 1.0;
  for (int p = 1; p <= table.max_order(); ++p) {
    rr_pow *= geom.ref_radius;
    rq_pow *= geom.query_radius;
    const double factor = table.remainder_factor(p);
    if (p_dh == 0) {
      const double e = scale * factor * rr_pow;
      if (e <= maxerr) p_dh = p, e_dh = e;
    }
    if (p_dl == 0) {
      const double e = scale * factor * rq_pow;
      if (e <= maxerr) p_dl = p, e_dl = e;
    }
    if (p_h2l == 0) {
      const double e = h2l_bound(factor, table.term_count(p), p, decay, geom);
      if (e <= maxerr) p_h2l = p, e_h2l = e;
    }
    if (p_dh && p_dl && p_h2l) break;
  }

  const double c_dh = p_dh ? static_cast<double>(geom.query_count) * std::pow(dim, p_dh + 1) : inf;
  const double c_dl = p_dl ? static_cast<double>(geom.ref_count) * std::pow(dim, p_dl + 1) : inf;
  const double c_h2l = p_h2l ? std::pow(dim, 2 * p_h2l + 1) : inf;
  const double c_direct =
      dim * static_cast<double>(geom.query_count) * static_cast<double>(geom.ref_count);
  const double c = std::min(std::min(c_dh, c_dl), std::min(c_h2l, c_direct));

  if (c == c_dh) return {ApproximationMethod::DirectHermite, p_dh, e_dh, c_dh};
  if (c == c_dl) return {ApproximationMethod::DirectLocal, p_dl, e_dl, c_dl};
  if (c == c_h2l) return {ApproximationMethod::HermiteToLocal, p_h2l, e_h2l, c_h2l};
  return {ApproximationMethod::Exhaustive, 0, 0.0, c_direct};
}

}  // namespace fastgauss
