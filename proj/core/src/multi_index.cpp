#include "fastgauss/multi_index.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "fastgauss/combinatorics.hpp"

namespace fastgauss {

int MultiIndex::degree() const { return std::accumulate(digits.begin(), digits.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int a : digits) f *= fastgauss::factorial(a);
  return f;
}

std::size_t multi_index_count(int dim, int order) {
  if (dim <= 0 || order <= 0) return 0;
  return static_cast<std::size_t>(binomial(dim + order - 1, dim) + 0.5);
}

namespace {

// Appends every composition of `remaining` into the digits [pos, dim) in
// descending lexicographic order.
void append_compositions(std::vector<int>& current, int pos, int remaining,
                         std::vector<std::vector<int>>& out) {
  const int dim = static_cast<int>(current.size());
  if (pos == dim - 1) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[pos] = k;
    append_compositions(current, pos + 1, remaining - k, out);
  }
  current[pos] = 0;
}

std::vector<std::vector<int>> graded_lex(int dim, int order) {
  if (dim <= 0) throw std::invalid_argument("multi-index dimension must be positive");
  if (order <= 0) throw std::invalid_argument("multi-index order must be positive");
  std::vector<std::vector<int>> out;
  out.reserve(multi_index_count(dim, order));
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  for (int degree = 0; degree < order; ++degree) append_compositions(current, 0, degree, out);
  return out;
}

}  // namespace

std::vector<MultiIndex> enumerate_multi_indices(int dim, int order) {
  auto raw = graded_lex(dim, order);
  std::vector<MultiIndex> out;
  out.reserve(raw.size());
  for (auto& d : raw) out.push_back(MultiIndex{std::move(d)});
  return out;
}

MultiIndexSet::MultiIndexSet(int dim, int order) : dim_(dim), order_(order) {
  const auto raw = graded_lex(dim, order);
  const std::size_t n = raw.size();
  digits_.reserve(n * static_cast<std::size_t>(dim));
  degree_.resize(n);
  factorial_.resize(n);
  inv_factorial_.resize(n);
  prefix_.assign(n, 0);
  split_dim_.assign(n, -1);
  split_power_.assign(n, 0);
  degree_offsets_.assign(static_cast<std::size_t>(order) + 1, n);

  for (std::size_t i = 0; i < n; ++i) {
    digits_.insert(digits_.end(), raw[i].begin(), raw[i].end());
    int deg = 0;
    double fact = 1.0;
    for (int a : raw[i]) {
      deg += a;
      fact *= fastgauss::factorial(a);
    }
    degree_[i] = deg;
    factorial_[i] = fact;
    inv_factorial_[i] = 1.0 / fact;
    if (degree_offsets_[static_cast<std::size_t>(deg)] == n) {
      degree_offsets_[static_cast<std::size_t>(deg)] = i;
    }
  }

  for (std::size_t i = 1; i < n; ++i) {
    std::vector<int> head = raw[i];
    int last = dim - 1;
    while (head[static_cast<std::size_t>(last)] == 0) --last;
    split_dim_[i] = last;
    split_power_[i] = head[static_cast<std::size_t>(last)];
    head[static_cast<std::size_t>(last)] = 0;
    const auto p = index_of(head);
    prefix_[i] = static_cast<std::size_t>(p);
  }
}

std::size_t MultiIndexSet::count_below(int order) const {
  if (order <= 0) return 0;
  if (order >= order_) return size();
  return degree_offsets_[static_cast<std::size_t>(order)];
}

std::ptrdiff_t MultiIndexSet::index_of(std::span<const int> digits) const {
  if (digits.size() != static_cast<std::size_t>(dim_)) return -1;
  int deg = 0;
  for (int a : digits) {
    if (a < 0) return -1;
    deg += a;
  }
  if (deg >= order_) return -1;
  // Entries of one degree are sorted descending lexicographically.
  const auto begin = static_cast<std::ptrdiff_t>(degree_offsets_[static_cast<std::size_t>(deg)]);
  const auto end = static_cast<std::ptrdiff_t>(count_below(deg + 1));
  std::ptrdiff_t lo = begin;
  std::ptrdiff_t hi = end;
  while (lo < hi) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    const auto cand = this->digits(static_cast<std::size_t>(mid));
    if (std::lexicographical_compare(digits.begin(), digits.end(), cand.begin(), cand.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < end) {
    const auto cand = this->digits(static_cast<std::size_t>(lo));
    if (std::equal(digits.begin(), digits.end(), cand.begin())) return lo;
  }
  return -1;
}

std::shared_ptr<const MultiIndexSet> shared_multi_index_set(int dim, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, order}];
  if (!slot) slot = std::make_shared<const MultiIndexSet>(dim, order);
  return slot;
}

}  // namespace fastgauss
