#include "fastgauss/hermite.hpp"

#include <cmath>
#include <stdexcept>

namespace fastgauss {

double hermite_function_1d(int n, double t) {
  if (n < 0) throw std::invalid_argument("Hermite order must be non-negative");
  double prev = std::exp(-t * t);
  if (n == 0) return prev;
  double cur = 2.0 * t * prev;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * t * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_functions(double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = std::exp(-t * t);
  if (out.size() == 1) return;
  out[1] = 2.0 * t * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = 2.0 * t * out[k] - 2.0 * static_cast<double>(k) * out[k - 1];
  }
}

void hermite_polynomials(double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 2.0 * t;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    out[k + 1] = 2.0 * t * out[k] - 2.0 * static_cast<double>(k) * out[k - 1];
  }
}

double hermite_multivariate(const MultiIndex& alpha, std::span<const double> t) {
  if (alpha.dim() != t.size()) throw std::invalid_argument("multi-index and point dimensions differ");
  double v = 1.0;
  for (std::size_t d = 0; d < t.size(); ++d) v *= hermite_function_1d(alpha.digits[d], t[d]);
  return v;
}

double monomial_power(const MultiIndex& alpha, std::span<const double> t) {
  if (alpha.dim() != t.size()) throw std::invalid_argument("multi-index and point dimensions differ");
  double v = 1.0;
  for (std::size_t d = 0; d < t.size(); ++d) {
    for (int k = 0; k < alpha.digits[d]; ++k) v *= t[d];
  }
  return v;
}

}  // namespace fastgauss
