#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fastgauss/engine.hpp"
#include "fastgauss/multi_index.hpp"
#include "fastgauss/tree.hpp"
#include "oracles.hpp"

using namespace fastgauss;

namespace {

PointStore random_store(oracle::Rng& rng, std::size_t n, std::size_t dim, bool weighted = false) {
  auto coords = rng.points(n, dim);
  std::vector<double> w;
  if (weighted) {
    w.resize(n);
    for (double& v : w) v = rng.uniform(0.1, 5.0);
  }
  return PointStore(std::move(coords), dim, std::move(w));
}

void check_moments_against_oracle(const KdTree& tree, double h, double tol) {
  const int dim = static_cast<int>(tree.dim());
  const auto idx = enumerate_multi_indices(dim, tree.moment_order());
  for (int n = 0; n < static_cast<int>(tree.node_count()); ++n) {
    const auto coords = tree.node_coords(n);
    const auto w = tree.node_weights(n);
    const auto m = tree.moments(n);
    std::vector<double> abs_coords(coords.size());
    const auto c = tree.centroid(n);
    for (std::size_t i = 0; i < coords.size(); ++i) abs_coords[i] = std::abs(coords[i] - c[i % c.size()]);
    const std::vector<double> origin(c.size(), 0.0);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto want = oracle::far_coeff(idx[i].digits, coords, w, c, h);
      const auto scale = oracle::far_coeff(idx[i].digits, abs_coords, w, origin, h);
      CHECK(std::abs(m[i] - static_cast<double>(want)) <= tol * static_cast<double>(scale));
    }
  }
}

}  // namespace

TEST_CASE("point store") {
  PointStore p({0, 0, 1, 0, 0, 1}, 2);
  CHECK(p.size() == 3);
  CHECK(p.total_weight() == 3.0);
  CHECK_THROWS_AS(PointStore({0, 0, 1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(PointStore({0, 0}, 2, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointStore({0, 0}, 2, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(PointStore({0, 0}, 0), std::invalid_argument);
}

TEST_CASE("tree: trivial shapes") {
  oracle::Rng rng(21);
  KdTree small(random_store(rng, 20, 3), 25);
  CHECK(small.node_count() == 1);
  CHECK(small.node(0).is_leaf());

  std::vector<double> same(200 * 2, 0.5);
  KdTree dup(PointStore(same, 2), 4);
  CHECK(dup.node_count() == 1);
  const auto b = dup.bounding_box(0);
  CHECK(b.lo == b.hi);
  CHECK(dup.node(0).max_inf_radius == 0.0);

  CHECK_THROWS_AS(KdTree(PointStore({}, 2)), std::invalid_argument);
  CHECK_THROWS_AS(KdTree(random_store(rng, 10, 2), 0), std::invalid_argument);
}

TEST_CASE("tree: structure over random points") {
  oracle::Rng rng(22);
  for (std::size_t dim : {1u, 2u, 3u, 5u, 8u}) {
    const auto store = random_store(rng, 1000, dim, true);
    const std::vector<double> orig(store.coords().begin(), store.coords().end());
    KdTree tree(store, 10);
    const auto& pts = tree.points();

    // Permutation maps tree rows back to the input rows.
    std::vector<std::size_t> perm(pts.permutation().begin(), pts.permutation().end());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t d = 0; d < dim; ++d) CHECK(pts.point(i)[d] == orig[perm[i] * dim + d]);
    }
    std::sort(perm.begin(), perm.end());
    for (std::size_t i = 0; i < perm.size(); ++i) CHECK(perm[i] == i);

    std::vector<int> leaf_hits(pts.size(), 0);
    for (int n = 0; n < static_cast<int>(tree.node_count()); ++n) {
      const auto& nd = tree.node(n);
      const auto box = tree.bounding_box(n);
      for (std::size_t i = nd.begin; i < nd.end; ++i) CHECK(box.contains(pts.point(i)));
      const auto c = tree.centroid(n);
      CHECK(box.contains(c));
      double radius = 0.0;
      double w = 0.0;
      for (std::size_t i = nd.begin; i < nd.end; ++i) {
        for (std::size_t d = 0; d < dim; ++d) radius = std::max(radius, std::abs(pts.point(i)[d] - c[d]));
        w += pts.weights()[i];
      }
      CHECK(nd.max_inf_radius == doctest::Approx(radius));
      CHECK(nd.weight_sum == doctest::Approx(w));
      if (nd.is_leaf()) {
        CHECK(nd.count() <= 10);
        for (std::size_t i = nd.begin; i < nd.end; ++i) ++leaf_hits[i];
        continue;
      }
      CHECK(nd.left > n);
      CHECK(nd.right > nd.left);
      const auto& l = tree.node(nd.left);
      const auto& r = tree.node(nd.right);
      CHECK(l.begin == nd.begin);
      CHECK(l.end == r.begin);
      CHECK(r.end == nd.end);
      CHECK(l.weight_sum + r.weight_sum == doctest::Approx(nd.weight_sum));
      for (int child : {nd.left, nd.right}) {
        const auto cb = tree.bounding_box(child);
        CHECK(box.contains(cb.lo));
        CHECK(box.contains(cb.hi));
      }
    }
    for (int hits : leaf_hits) CHECK(hits == 1);
    CHECK(tree.node(0).weight_sum == doctest::Approx(store.total_weight()));
  }
}

TEST_CASE("tree: heavy duplicates still split") {
  oracle::Rng rng(23);
  std::vector<double> coords;
  for (int i = 0; i < 300; ++i) {
    const double v = i < 290 ? 0.25 : rng.uniform();
    coords.push_back(v);
    coords.push_back(v);
  }
  KdTree tree(PointStore(coords, 2), 5);
  std::size_t covered = 0;
  for (const auto& nd : tree.nodes()) {
    if (nd.is_leaf()) covered += nd.count();
  }
  CHECK(covered == 300);
}

TEST_CASE("moments: direct, H2H and bandwidth rescaling") {
  oracle::Rng rng(24);
  const double h = 0.3;
  KdTree leaf(random_store(rng, 15, 2, true), 25);
  leaf.refresh_moments(h, 6);
  CHECK(leaf.has_moments());
  CHECK(leaf.moment_bandwidth() == h);
  const auto direct = accumulate_far_field(leaf.node_coords(0), leaf.node_weights(0), leaf.centroid(0), 6, h);
  const auto m = leaf.moments(0);
  for (std::size_t i = 0; i < direct.coeffs.size(); ++i) CHECK(m[i] == doctest::Approx(direct.coeffs[i]));

  KdTree two(random_store(rng, 40, 2, true), 25);
  REQUIRE(two.node_count() == 3);
  two.refresh_moments(h, 8);
  check_moments_against_oracle(two, h, 1e-10);

  for (std::size_t dim : {1u, 3u, 5u}) {
    KdTree tree(random_store(rng, 400, dim, true), 12);
    tree.refresh_moments(0.2, 5);
    check_moments_against_oracle(tree, 0.2, 1e-10);

    // Displacements scale by 1/2 from h to 2h and by 1/sqrt2 from h to sqrt2 h.
    const auto idx = enumerate_multi_indices(static_cast<int>(dim), 5);
    std::vector<double> base(tree.moments(0).begin(), tree.moments(0).end());
    tree.refresh_moments(0.4, 5);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      CHECK(tree.moments(0)[i] == doctest::Approx(base[i] * std::pow(0.5, idx[i].degree())).scale(1e-12));
    }
    tree.refresh_moments(0.2 * std::sqrt(2.0), 5);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      CHECK(tree.moments(0)[i] ==
            doctest::Approx(base[i] * std::pow(std::sqrt(0.5), idx[i].degree())).scale(1e-12));
    }
  }
  CHECK_THROWS_AS(leaf.refresh_moments(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(leaf.refresh_moments(1.0, 0), std::invalid_argument);
}

TEST_CASE("box distances") {
  const BoundingBox a{{0, 0}, {1, 1}};
  const BoundingBox b{{0.5, 0.5}, {2, 2}};
  CHECK(min_sq_dist(a, b) == 0.0);
  const BoundingBox p{{0.3, 0.3}, {0.3, 0.3}};
  CHECK(min_sq_dist(p, p) == 0.0);
  CHECK(max_sq_dist(p, p) == 0.0);
  const BoundingBox c{{3, 0}, {4, 1}};
  CHECK(min_sq_dist(a, c) == doctest::Approx(4.0));
  CHECK(max_sq_dist(a, c) == doctest::Approx(16.0 + 1.0));
  CHECK_THROWS_AS(min_sq_dist(a, BoundingBox{{0}, {1}}), std::invalid_argument);

  oracle::Rng rng(25);
  for (int trial = 0; trial < 500; ++trial) {
    const auto dim = static_cast<std::size_t>(rng.integer(1, 6));
    BoundingBox x{std::vector<double>(dim), std::vector<double>(dim)};
    BoundingBox y = x;
    for (std::size_t d = 0; d < dim; ++d) {
      x.lo[d] = rng.uniform(-1, 1);
      x.hi[d] = x.lo[d] + rng.uniform(0, 1);
      y.lo[d] = rng.uniform(-1, 1);
      y.hi[d] = y.lo[d] + rng.uniform(0, 1);
    }
    const double lo = min_sq_dist(x, y), hi = max_sq_dist(x, y);
    CHECK(min_sq_dist(y, x) == lo);
    CHECK(max_sq_dist(y, x) == hi);
    for (int s = 0; s < 50; ++s) {
      double sq = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = rng.uniform(x.lo[d], x.hi[d]) - rng.uniform(y.lo[d], y.hi[d]);
        sq += diff * diff;
      }
      CHECK(sq >= lo * (1 - 1e-12));
      CHECK(sq <= hi * (1 + 1e-12));
    }
  }
}

TEST_CASE("query state reset and exhaustive base cases") {
  oracle::Rng rng(26);
  const auto store = random_store(rng, 300, 2, true);
  const double total = store.total_weight();
  KdTree qtree(store, 20);
  KdTree rtree(random_store(rng, 250, 2, true), 20);
  QueryState state;
  reset_query_state(state, qtree, total, 4);
  CHECK(state.node_max[0] - state.node_min[0] == total);
  CHECK(state.local_stride == multi_index_count(2, 4));
  CHECK(std::all_of(state.tokens.begin(), state.tokens.end(), [](double t) { return t == 0.0; }));

  RunConfig config;
  config.bandwidth = 0.1;
  config.algorithm = Algorithm::Dfd;
  DualTreeTraversal trav(config, qtree, rtree);
  for (int q = 0; q < static_cast<int>(qtree.node_count()); ++q) {
    if (!qtree.node(q).is_leaf()) continue;
    for (int r = 0; r < static_cast<int>(rtree.node_count()); ++r) {
      if (rtree.node(r).is_leaf()) trav.base_case(q, r);
    }
  }
  const auto& st = trav.state();
  for (std::size_t k = 0; k < qtree.points().size(); ++k) {
    const auto want = static_cast<double>(oracle::kernel_sum(
        qtree.points().point(k), rtree.points().coords(), rtree.points().weights(), 0.1));
    CHECK(st.query_min[k] == doctest::Approx(want).epsilon(1e-12));
    CHECK(st.query_max[k] == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(std::all_of(st.tokens.begin(), st.tokens.end(), [](double t) { return t == 0.0; }));
}
