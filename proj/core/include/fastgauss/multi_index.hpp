#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fastgauss {

/// A D-tuple of non-negative integers (alpha_1, ..., alpha_D).
struct MultiIndex {
  std::vector<int> digits;

  int degree() const;
  std::size_t dim() const { return digits.size(); }
  double factorial() const;  // alpha! = alpha_1! ... alpha_D!

  bool operator==(const MultiIndex&) const = default;
};

/// Number of multi-indices in `dim` dimensions with degree < `order`,
/// i.e. C(dim + order - 1, dim).
std::size_t multi_index_count(int dim, int order);

/// All multi-indices with |alpha| < order, graded by degree and, within a
/// degree, lexicographically descending: (0,0), (1,0), (0,1), (2,0), ...
/// Throws std::invalid_argument for dim <= 0 or order <= 0.
std::vector<MultiIndex> enumerate_multi_indices(int dim, int order);

/// Flat, immutable view of the graded-lex enumeration used as the storage
/// layout of every coefficient vector. The enumeration for a lower order is
/// a prefix of this one, so truncating a coefficient vector to order p is
/// taking its first count_below(p) entries.
///
/// Each non-zero index is split as alpha = prefix + k * e_d where d is the
/// last non-zero dimension of alpha. The prefix always precedes alpha, which
/// lets product bases be filled with one multiply per entry:
///   basis[i] = basis[prefix(i)] * ladder[split_dim(i)][split_power(i)].
class MultiIndexSet {
 public:
  MultiIndexSet(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }

  std::span<const int> digits(std::size_t i) const {
    return {digits_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t i) const { return degree_[i]; }
  double factorial(std::size_t i) const { return factorial_[i]; }
  double inv_factorial(std::size_t i) const { return inv_factorial_[i]; }

  std::size_t prefix(std::size_t i) const { return prefix_[i]; }
  int split_dim(std::size_t i) const { return split_dim_[i]; }
  int split_power(std::size_t i) const { return split_power_[i]; }

  /// Number of leading entries with degree < order (order clamped to this
  /// set's order).
  std::size_t count_below(int order) const;

  /// Position of `digits` in the enumeration, or -1 when absent.
  std::ptrdiff_t index_of(std::span<const int> digits) const;

 private:
  int dim_;
  int order_;
  std::vector<int> digits_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<double> inv_factorial_;
  std::vector<std::size_t> prefix_;
  std::vector<int> split_dim_;
  std::vector<int> split_power_;
  std::vector<std::size_t> degree_offsets_;
};

/// Process-wide cache; each (dim, order) pair is built once and shared.
std::shared_ptr<const MultiIndexSet> shared_multi_index_set(int dim, int order);

}  // namespace fastgauss
