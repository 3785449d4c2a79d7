#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastgauss/tree.hpp"

namespace fastgauss {

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  bool has_weights = false;  // last column is the weight
  bool header = false;       // skip the first non-empty line
  bool rescale = false;      // min-max map every coordinate into [0, 1]
};

/// Reads a rectangular comma-separated numeric file. Throws LoadError on
/// ragged rows, non-numeric fields, non-positive weights or an empty file.
PointStore load_points(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes rows as comma-separated values with 17 significant digits; the
/// weight column is appended when `with_weights` is set.
void save_points(const std::filesystem::path& path, const PointStore& points,
                 bool with_weights = false);

/// Per-dimension min-max map into [0, 1]; constant dimensions map to 0.
void rescale_unit_cube(std::vector<double>& coords, std::size_t dim);

enum class Distribution { Uniform, Clusters, Duplicates };

Distribution parse_distribution(const std::string& name);

/// Synthetic datasets in [0, 1]^D:
///  - Uniform: i.i.d. uniform points.
///  - Clusters: 5-component isotropic Gaussian mixture, clipped to the cube.
///  - Duplicates: uniform points of which 10% are exact copies of others.
PointStore generate_points(Distribution dist, std::size_t n, std::size_t dim, std::uint64_t seed);

}  // namespace fastgauss
