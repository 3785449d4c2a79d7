#pragma once

// Independent reference computations for the tests. Everything here is
// written directly from the defining formulas in long double and shares no
// code with the library beyond plain data types.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oracle {

using Real = long double;

inline Real fact(int n) {
  Real f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// H_n(t) from the explicit sum n! sum_m (-1)^m (2t)^(n-2m) / (m! (n-2m)!).
inline Real hermite_poly(int n, Real t) {
  Real s = 0;
  for (int m = 0; 2 * m <= n; ++m) {
    const Real term = std::pow(2 * t, static_cast<Real>(n - 2 * m)) / (fact(m) * fact(n - 2 * m));
    s += (m % 2 ? -term : term);
  }
  return fact(n) * s;
}

inline Real hermite_fn(int n, Real t) { return std::exp(-t * t) * hermite_poly(n, t); }

inline Real hermite_fn(std::span<const int> alpha, std::span<const Real> t) {
  Real v = 1;
  for (std::size_t d = 0; d < alpha.size(); ++d) v *= hermite_fn(alpha[d], t[d]);
  return v;
}

inline Real monomial(std::span<const int> alpha, std::span<const Real> t) {
  Real v = 1;
  for (std::size_t d = 0; d < alpha.size(); ++d) {
    for (int k = 0; k < alpha[d]; ++k) v *= t[d];
  }
  return v;
}

inline Real multi_fact(std::span<const int> alpha) {
  Real v = 1;
  for (int a : alpha) v *= fact(a);
  return v;
}

// Every digit tuple with sum < order, by brute force over [0, order)^dim;
// no ordering is implied.
inline std::vector<std::vector<int>> all_indices(int dim, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  while (true) {
    int sum = 0;
    for (int c : cur) sum += c;
    if (sum < order) out.push_back(cur);
    int d = 0;
    while (d < dim && ++cur[static_cast<std::size_t>(d)] == order) cur[static_cast<std::size_t>(d++)] = 0;
    if (d == dim) break;
  }
  return out;
}

inline std::vector<Real> scaled(std::span<const double> x, std::span<const double> c, double h) {
  const Real s = std::sqrt(static_cast<Real>(2) * h * h);
  std::vector<Real> t(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) t[d] = (static_cast<Real>(x[d]) - c[d]) / s;
  return t;
}

inline Real kernel_sum(std::span<const double> x, std::span<const double> coords,
                       std::span<const double> weights, double h) {
  const std::size_t dim = x.size();
  Real s = 0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    Real sq = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const Real diff = static_cast<Real>(x[d]) - coords[r * dim + d];
      sq += diff * diff;
    }
    s += weights[r] * std::exp(-sq / (2 * static_cast<Real>(h) * h));
  }
  return s;
}

// A_alpha = sum_r (w_r / alpha!) ((x_r - c) / sqrt(2h^2))^alpha.
inline Real far_coeff(std::span<const int> alpha, std::span<const double> coords,
                      std::span<const double> weights, std::span<const double> c, double h) {
  const std::size_t dim = alpha.size();
  Real s = 0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    const auto t = scaled(coords.subspan(r * dim, dim), c, h);
    s += weights[r] * monomial(alpha, t);
  }
  return s / multi_fact(alpha);
}

// B_beta = sum_r (w_r / beta!) h_beta((x_r - c) / sqrt(2h^2)).
inline Real local_coeff(std::span<const int> beta, std::span<const double> coords,
                        std::span<const double> weights, std::span<const double> c, double h) {
  const std::size_t dim = beta.size();
  Real s = 0;
  for (std::size_t r = 0; r < weights.size(); ++r) {
    const auto t = scaled(coords.subspan(r * dim, dim), c, h);
    s += weights[r] * hermite_fn(beta, t);
  }
  return s / multi_fact(beta);
}

// Truncated far-field sum over every |alpha| < order, from the points.
inline Real far_field_value(int order, std::span<const double> x, std::span<const double> coords,
                            std::span<const double> weights, std::span<const double> c, double h) {
  const int dim = static_cast<int>(x.size());
  const auto t = scaled(x, c, h);
  Real s = 0;
  for (const auto& a : all_indices(dim, order)) {
    s += far_coeff(a, coords, weights, c, h) * hermite_fn(a, t);
  }
  return s;
}

// Truncated local (Taylor) sum over every |beta| < order, from the points.
inline Real local_value(int order, std::span<const double> x, std::span<const double> coords,
                        std::span<const double> weights, std::span<const double> c, double h) {
  const int dim = static_cast<int>(x.size());
  const auto t = scaled(x, c, h);
  Real s = 0;
  for (const auto& b : all_indices(dim, order)) {
    s += local_coeff(b, coords, weights, c, h) * monomial(b, t);
  }
  return s;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  std::vector<double> points(std::size_t n, std::size_t dim, double lo = 0.0, double hi = 1.0) {
    std::vector<double> v(n * dim);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
};

}  // namespace oracle
