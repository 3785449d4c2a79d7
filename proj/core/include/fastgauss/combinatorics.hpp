#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace fastgauss {

inline constexpr int kMaxFactorial = 170;

namespace detail {
constexpr std::array<double, kMaxFactorial + 1> make_factorials() {
  std::array<double, kMaxFactorial + 1> f{};
  f[0] = 1.0;
  for (int n = 1; n <= kMaxFactorial; ++n) f[n] = f[n - 1] * n;
  return f;
}
inline constexpr auto kFactorials = make_factorials();
}  // namespace detail

/// n! as a double; exact for n <= 22.
inline double factorial(int n) {
  if (n < 0 || n > kMaxFactorial) throw std::out_of_range("factorial argument out of range");
  return detail::kFactorials[static_cast<std::size_t>(n)];
}

/// C(n, k) evaluated by the multiplicative formula; 0 when k is outside [0, n].
inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace fastgauss
