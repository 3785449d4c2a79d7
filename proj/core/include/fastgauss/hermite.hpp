#pragma once

#include <span>

#include "fastgauss/multi_index.hpp"

namespace fastgauss {

/// Hermite function h_n(t) = exp(-t^2) H_n(t), via the three-term recurrence
/// h_{n+1} = 2t h_n - 2n h_{n-1}.
double hermite_function_1d(int n, double t);

/// Fills out[k] = h_k(t) for k = 0 .. out.size()-1.
void hermite_functions(double t, std::span<double> out);

/// Fills out[k] = H_k(t) (physicists' Hermite polynomials).
void hermite_polynomials(double t, std::span<double> out);

/// Multivariate Hermite function prod_d h_{alpha_d}(t_d).
/// Throws std::invalid_argument on dimension mismatch.
double hermite_multivariate(const MultiIndex& alpha, std::span<const double> t);

/// t^alpha = prod_d t_d^{alpha_d}, with 0^0 = 1.
/// Throws std::invalid_argument on dimension mismatch.
double monomial_power(const MultiIndex& alpha, std::span<const double> t);

}  // namespace fastgauss
