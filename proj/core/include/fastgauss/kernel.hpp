#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fastgauss {

/// Bandwidth and dimension of a Gaussian summation problem.
struct KernelConfig {
  double bandwidth;
  int dim;

  KernelConfig(double h, int d) : bandwidth(h), dim(d) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");
    if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  }
};

/// exp(-sq_dist / (2 h^2)).
inline double gaussian_kernel(double sq_dist, double h) {
  return std::exp(-sq_dist / (2.0 * h * h));
}

/// Gaussian kernel with the 1/(2h^2) factor hoisted out of the inner loops.
class GaussianKernel {
 public:
  explicit GaussianKernel(double h) : bandwidth_(h), neg_inv_two_h2_(-1.0 / (2.0 * h * h)) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");
  }

  double operator()(double sq_dist) const { return std::exp(sq_dist * neg_inv_two_h2_); }
  double bandwidth() const { return bandwidth_; }
  /// sqrt(2 h^2): the displacement scale used by every series expansion.
  double series_scale() const { return std::sqrt(2.0) * bandwidth_; }

 private:
  double bandwidth_;
  double neg_inv_two_h2_;
};

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace fastgauss
