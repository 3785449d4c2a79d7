#pragma once

#include <cstddef>
#include <cstdint>

#include "fastgauss/tree.hpp"

namespace fastgauss {

struct BandwidthSearch {
  std::size_t max_sample = 2000;  // subsample size for the score
  std::size_t grid_points = 33;   // log grid over [1e-3, 10] x data scale
  int refine_iterations = 40;     // golden-section steps in log h
  double epsilon = 1e-6;          // engine tolerance for the score sums
  std::uint64_t seed = 0;
};

/// Least-squares cross-validation score of a Gaussian KDE with bandwidth h
/// over unit-weight points:
///   int f^2 - (2/N) sum_i f_{-i}(x_i).
double lscv_score(const PointStore& points, double h, double epsilon = 1e-6);

/// Bandwidth minimising lscv_score. Exact duplicates are dropped and, when
/// the data have more than max_sample points, the score is evaluated on a
/// seeded subsample and the minimiser rescaled by (n / N)^(1/(D+4)).
/// Throws std::invalid_argument when fewer than two distinct points remain.
double select_bandwidth(const PointStore& points, const BandwidthSearch& search = {});

}  // namespace fastgauss
