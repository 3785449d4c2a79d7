#include "fastgauss/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "fastgauss/hermite.hpp"

namespace fastgauss {

ExpansionLayout::ExpansionLayout(int dim, int max_order)
    : terms_(shared_multi_index_set(dim, max_order)),
      extended_(shared_multi_index_set(dim, 2 * max_order - 1)) {
  const std::size_t n = terms_->size();
  sum_.resize(n * n);
  std::vector<int> digits(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = terms_->digits(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto b = terms_->digits(j);
      for (std::size_t d = 0; d < digits.size(); ++d) digits[d] = a[d] + b[d];
      const auto k = extended_->index_of(digits);
      if (k < 0) throw std::logic_error("extended multi-index set is missing a sum");
      sum_[i * n + j] = static_cast<std::uint32_t>(k);
    }
  }
}

std::shared_ptr<const ExpansionLayout> shared_expansion_layout(int dim, int max_order) {
  if (dim <= 0 || max_order <= 0) throw std::invalid_argument("expansion layout needs dim, order >= 1");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ExpansionLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, max_order}];
  if (!slot) slot = std::make_shared<const ExpansionLayout>(dim, max_order);
  return slot;
}

SeriesEvaluator::SeriesEvaluator(std::shared_ptr<const ExpansionLayout> layout)
    : layout_(std::move(layout)) {
  const auto dim = static_cast<std::size_t>(layout_->dim());
  const auto ext_order = static_cast<std::size_t>(layout_->extended().order());
  t_.resize(dim);
  ladder_.resize(dim * ext_order);
  basis_.resize(layout_->extended().size());
  accum_.resize(layout_->terms().size());
}

void SeriesEvaluator::scale_displacement(std::span<const double> x, std::span<const double> center,
                                         double h) {
  const double inv = 1.0 / (std::sqrt(2.0) * h);
  for (std::size_t d = 0; d < t_.size(); ++d) t_[d] = (x[d] - center[d]) * inv;
}

void SeriesEvaluator::fill_monomials(const MultiIndexSet& set, std::size_t count, int order) {
  const auto len = static_cast<std::size_t>(order);
  for (std::size_t d = 0; d < t_.size(); ++d) {
    double* row = ladder_.data() + d * len;
    row[0] = 1.0;
    for (std::size_t k = 1; k < len; ++k) row[k] = row[k - 1] * t_[d];
  }
  basis_[0] = 1.0;
  for (std::size_t i = 1; i < count; ++i) {
    basis_[i] = basis_[set.prefix(i)] *
                ladder_[static_cast<std::size_t>(set.split_dim(i)) * len +
                        static_cast<std::size_t>(set.split_power(i))];
  }
}

double SeriesEvaluator::fill_hermite(const MultiIndexSet& set, std::size_t count, int order) {
  const auto len = static_cast<std::size_t>(order);
  double sq = 0.0;
  for (std::size_t d = 0; d < t_.size(); ++d) {
    sq += t_[d] * t_[d];
    hermite_polynomials(t_[d], std::span<double>(ladder_.data() + d * len, len));
  }
  basis_[0] = 1.0;
  for (std::size_t i = 1; i < count; ++i) {
    basis_[i] = basis_[set.prefix(i)] *
                ladder_[static_cast<std::size_t>(set.split_dim(i)) * len +
                        static_cast<std::size_t>(set.split_power(i))];
  }
  return std::exp(-sq);
}

void SeriesEvaluator::accumulate_far_field(std::span<const double> coords,
                                           std::span<const double> weights,
                                           std::span<const double> center, double h, int order,
                                           std::span<double> coeffs) {
  const auto& set = layout_->terms();
  const std::size_t dim = t_.size();
  const std::size_t count = set.count_below(order);
  std::fill(accum_.begin(), accum_.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    scale_displacement(coords.subspan(r * dim, dim), center, h);
    fill_monomials(set, count, order);
    const double w = weights[r];
    for (std::size_t i = 0; i < count; ++i) accum_[i] += w * basis_[i];
  }
  for (std::size_t i = 0; i < count; ++i) coeffs[i] += accum_[i] * set.inv_factorial(i);
}

double SeriesEvaluator::eval_far_field(std::span<const double> coeffs, int order,
                                       std::span<const double> center, double h,
                                       std::span<const double> x) {
  const auto& set = layout_->terms();
  const std::size_t count = set.count_below(order);
  scale_displacement(x, center, h);
  const double g = fill_hermite(set, count, order);
  if (g == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += coeffs[i] * basis_[i];
  return g * sum;
}

void SeriesEvaluator::accumulate_local(std::span<const double> coords,
                                       std::span<const double> weights,
                                       std::span<const double> center, double h, int order,
                                       std::span<double> coeffs) {
  const auto& set = layout_->terms();
  const std::size_t dim = t_.size();
  const std::size_t count = set.count_below(order);
  std::fill(accum_.begin(), accum_.begin() + static_cast<std::ptrdiff_t>(count), 0.0);
  for (std::size_t r = 0; r < weights.size(); ++r) {
    scale_displacement(coords.subspan(r * dim, dim), center, h);
    const double g = fill_hermite(set, count, order);
    if (g == 0.0) continue;
    const double wg = weights[r] * g;
    for (std::size_t i = 0; i < count; ++i) accum_[i] += wg * basis_[i];
  }
  for (std::size_t i = 0; i < count; ++i) coeffs[i] += accum_[i] * set.inv_factorial(i);
}

double SeriesEvaluator::eval_local(std::span<const double> coeffs, int order,
                                   std::span<const double> center, double h,
                                   std::span<const double> x) {
  const auto& set = layout_->terms();
  const std::size_t count = set.count_below(order);
  scale_displacement(x, center, h);
  fill_monomials(set, count, order);
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += coeffs[i] * basis_[i];
  return sum;
}

void SeriesEvaluator::h2h(std::span<const double> child, int order,
                          std::span<const double> child_center,
                          std::span<const double> parent_center, double h,
                          std::span<double> parent) {
  const auto& set = layout_->terms();
  const std::size_t count = set.count_below(order);
  scale_displacement(child_center, parent_center, h);
  fill_monomials(set, count, order);
  // A_gamma = sum_{alpha + delta = gamma} A'_alpha s^delta / delta!
  for (std::size_t i = 0; i < count; ++i) {
    const double a = child[i];
    if (a == 0.0) continue;
    const std::size_t jmax = set.count_below(order - set.degree(i));
    for (std::size_t j = 0; j < jmax; ++j) {
      parent[layout_->sum_index(i, j)] += a * basis_[j] * set.inv_factorial(j);
    }
  }
}

void SeriesEvaluator::h2l(std::span<const double> far, int far_order,
                          std::span<const double> far_center,
                          std::span<const double> local_center, double h, int local_order,
                          std::span<double> local) {
  const auto& set = layout_->terms();
  const auto& ext = layout_->extended();
  const std::size_t far_count = set.count_below(far_order);
  const std::size_t local_count = set.count_below(local_order);
  const int ext_order = far_order + local_order - 1;
  scale_displacement(local_center, far_center, h);
  const double g = fill_hermite(ext, ext.count_below(ext_order), ext_order);
  if (g == 0.0) return;
  // C_beta = (-1)^|beta| / beta! sum_alpha A_alpha h_{alpha+beta}(t)
  for (std::size_t b = 0; b < local_count; ++b) {
    double sum = 0.0;
    for (std::size_t a = 0; a < far_count; ++a) sum += far[a] * basis_[layout_->sum_index(a, b)];
    const double sign = (set.degree(b) % 2 == 0) ? 1.0 : -1.0;
    local[b] += sign * set.inv_factorial(b) * g * sum;
  }
}

void SeriesEvaluator::l2l(std::span<const double> local, int order,
                          std::span<const double> old_center,
                          std::span<const double> new_center, double h, std::span<double> out) {
  const auto& set = layout_->terms();
  const auto& ext = layout_->extended();
  const std::size_t count = set.count_below(order);
  scale_displacement(new_center, old_center, h);
  fill_monomials(set, count, order);
  // B'_alpha = sum_delta (alpha+delta)! / (alpha! delta!) B_{alpha+delta} s^delta
  for (std::size_t a = 0; a < count; ++a) {
    const std::size_t jmax = set.count_below(order - set.degree(a));
    double sum = 0.0;
    for (std::size_t j = 0; j < jmax; ++j) {
      const std::size_t k = layout_->sum_index(a, j);
      sum += local[k] * ext.factorial(k) * set.inv_factorial(j) * basis_[j];
    }
    out[a] += sum * set.inv_factorial(a);
  }
}

namespace {

void check_points(std::span<const double> coords, std::span<const double> weights,
                  std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("expansion center must be non-empty");
  if (coords.size() != weights.size() * dim) {
    throw std::invalid_argument("coordinate count does not match weights and dimension");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
  }
}

void check_order_bandwidth(int order, double h) {
  if (order < 1) throw std::invalid_argument("expansion order must be at least 1");
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
}

void check_point(std::span<const double> x, std::size_t dim) {
  if (x.size() != dim) throw std::invalid_argument("point dimension does not match expansion");
}

SeriesEvaluator evaluator_for(std::size_t dim, int order) {
  return SeriesEvaluator(shared_expansion_layout(static_cast<int>(dim), order));
}

}  // namespace

FarFieldExpansion accumulate_far_field(std::span<const double> coords,
                                       std::span<const double> weights,
                                       std::span<const double> center, int order, double h) {
  check_order_bandwidth(order, h);
  check_points(coords, weights, center.size());
  auto ev = evaluator_for(center.size(), order);
  FarFieldExpansion out{{center.begin(), center.end()}, order, h,
                        std::vector<double>(ev.layout().size(order), 0.0)};
  ev.accumulate_far_field(coords, weights, center, h, order, out.coeffs);
  return out;
}

double eval_far_field(const FarFieldExpansion& expansion, std::span<const double> x) {
  check_point(x, expansion.center.size());
  auto ev = evaluator_for(expansion.center.size(), expansion.order);
  return ev.eval_far_field(expansion.coeffs, expansion.order, expansion.center,
                           expansion.bandwidth, x);
}

LocalExpansion accumulate_local_direct(std::span<const double> coords,
                                       std::span<const double> weights,
                                       std::span<const double> center, int order, double h) {
  check_order_bandwidth(order, h);
  check_points(coords, weights, center.size());
  auto ev = evaluator_for(center.size(), order);
  LocalExpansion out{{center.begin(), center.end()}, order, h,
                     std::vector<double>(ev.layout().size(order), 0.0)};
  ev.accumulate_local(coords, weights, center, h, order, out.coeffs);
  return out;
}

double eval_local(const LocalExpansion& expansion, std::span<const double> x) {
  check_point(x, expansion.center.size());
  auto ev = evaluator_for(expansion.center.size(), expansion.order);
  return ev.eval_local(expansion.coeffs, expansion.order, expansion.center, expansion.bandwidth,
                       x);
}

FarFieldExpansion translate_h2h(const FarFieldExpansion& child, std::span<const double> new_center) {
  FarFieldExpansion out{{new_center.begin(), new_center.end()}, child.order, child.bandwidth,
                        std::vector<double>(child.coeffs.size(), 0.0)};
  accumulate_h2h(out, child);
  return out;
}

void accumulate_h2h(FarFieldExpansion& parent, const FarFieldExpansion& child) {
  if (parent.order != child.order) throw std::invalid_argument("H2H order mismatch");
  if (parent.bandwidth != child.bandwidth) throw std::invalid_argument("H2H bandwidth mismatch");
  if (parent.center.size() != child.center.size()) {
    throw std::invalid_argument("H2H dimension mismatch");
  }
  check_order_bandwidth(child.order, child.bandwidth);
  auto ev = evaluator_for(child.center.size(), child.order);
  ev.h2h(child.coeffs, child.order, child.center, parent.center, child.bandwidth, parent.coeffs);
}

LocalExpansion translate_h2l(const FarFieldExpansion& source, std::span<const double> dest_center,
                             int dest_order) {
  check_order_bandwidth(dest_order, source.bandwidth);
  check_point(dest_center, source.center.size());
  auto ev = evaluator_for(source.center.size(), std::max(source.order, dest_order));
  LocalExpansion out{{dest_center.begin(), dest_center.end()}, dest_order, source.bandwidth,
                     std::vector<double>(ev.layout().size(dest_order), 0.0)};
  ev.h2l(source.coeffs, source.order, source.center, dest_center, source.bandwidth, dest_order,
         out.coeffs);
  return out;
}

LocalExpansion translate_l2l(const LocalExpansion& source, std::span<const double> new_center) {
  LocalExpansion out{{new_center.begin(), new_center.end()}, source.order, source.bandwidth,
                     std::vector<double>(source.coeffs.size(), 0.0)};
  accumulate_l2l(out, source);
  return out;
}

void accumulate_l2l(LocalExpansion& dest, const LocalExpansion& source) {
  if (dest.order != source.order) throw std::invalid_argument("L2L order mismatch");
  if (dest.bandwidth != source.bandwidth) throw std::invalid_argument("L2L bandwidth mismatch");
  if (dest.center.size() != source.center.size()) {
    throw std::invalid_argument("L2L dimension mismatch");
  }
  check_order_bandwidth(source.order, source.bandwidth);
  auto ev = evaluator_for(source.center.size(), source.order);
  ev.l2l(source.coeffs, source.order, source.center, dest.center, source.bandwidth, dest.coeffs);
}

}  // namespace fastgauss
