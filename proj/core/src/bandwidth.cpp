#include "fastgauss/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fastgauss/engine.hpp"

namespace fastgauss {

namespace {

// Sum over queries of G_h(x_q) with the points serving as both sets.
double self_sum(KdTree& tree, double h, double epsilon) {
  RunConfig config;
  config.epsilon = epsilon;
  config.bandwidth = h;
  config.algorithm = Algorithm::Dito;
  tree.refresh_moments(h, config.effective_plimit(tree.dim()));
  const auto result = dito_run(config, tree, tree);
  return std::accumulate(result.values.begin(), result.values.end(), 0.0);
}

double score(KdTree& tree, double h, double epsilon) {
  const auto n = static_cast<double>(tree.points().size());
  const auto dim = static_cast<double>(tree.dim());
  const double two_pi_h2 = 2.0 * std::numbers::pi * h * h;
  const double cross = self_sum(tree, std::sqrt(2.0) * h, epsilon);
  const double loo = self_sum(tree, h, epsilon) - n;
  return cross / (n * n * std::pow(2.0 * two_pi_h2, dim / 2.0)) -
         2.0 * loo / (n * (n - 1.0) * std::pow(two_pi_h2, dim / 2.0));
}

std::vector<double> distinct_rows(const PointStore& points) {
  const std::size_t dim = points.dim();
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row_less = [&](std::size_t a, std::size_t b) {
    const auto x = points.point(a), y = points.point(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  };
  auto row_equal = [&](std::size_t a, std::size_t b) {
    const auto x = points.point(a), y = points.point(b);
    return std::equal(x.begin(), x.end(), y.begin());
  };
  std::sort(order.begin(), order.end(), row_less);
  order.erase(std::unique(order.begin(), order.end(), row_equal), order.end());
  // Back to input order so subsampling does not depend on the sort.
  std::sort(order.begin(), order.end());
  std::vector<double> out;
  out.reserve(order.size() * dim);
  for (std::size_t i : order) {
    const auto x = points.point(i);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

}  // namespace

double lscv_score(const PointStore& points, double h, double epsilon) {
  if (points.size() < 2) throw std::invalid_argument("cross-validation needs at least two points");
  KdTree tree(PointStore({points.coords().begin(), points.coords().end()}, points.dim()));
  return score(tree, h, epsilon);
}

double select_bandwidth(const PointStore& points, const BandwidthSearch& search) {
  const std::size_t dim = points.dim();
  std::vector<double> coords = distinct_rows(points);
  std::size_t n = coords.size() / dim;
  if (n < 2) throw std::invalid_argument("bandwidth selection needs at least two distinct points");

  if (n > search.max_sample) {
    std::mt19937_64 rng(search.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(search.max_sample);
    std::sort(order.begin(), order.end());
    std::vector<double> sample;
    sample.reserve(order.size() * dim);
    for (std::size_t i : order) {
      sample.insert(sample.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                    coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
    }
    coords = std::move(sample);
  }
  const std::size_t m = coords.size() / dim;

  double spread = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += coords[i * dim + d];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double diff = coords[i * dim + d] - mean;
      var += diff * diff;
    }
    spread += var / static_cast<double>(m);
  }
  spread = std::sqrt(spread / static_cast<double>(dim));
  if (!(spread > 0.0)) throw std::invalid_argument("bandwidth selection needs non-degenerate data");

  KdTree tree(PointStore(std::move(coords), dim));
  auto objective = [&](double log_h) { return score(tree, std::exp(log_h), search.epsilon); };

  const std::size_t g = std::max<std::size_t>(search.grid_points, 3);
  const double lo = std::log(spread * 1e-3);
  const double hi = std::log(spread * 10.0);
  std::vector<double> grid(g), values(g);
  std::size_t best = 0;
  for (std::size_t i = 0; i < g; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1);
    values[i] = objective(grid[i]);
    if (values[i] < values[best]) best = i;
  }

  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[std::min(best + 1, g - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < search.refine_iterations; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double log_h = 0.5 * (a + b);
  if (values[best] < std::min(fc, fd)) log_h = grid[best];

  double h = std::exp(log_h);
  if (m < points.size()) {
    h *= std::pow(static_cast<double>(m) / static_cast<double>(points.size()),
                  1.0 / (static_cast<double>(dim) + 4.0));
  }
  return h;
}

}  // namespace fastgauss
