#include "fastgauss/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace fastgauss {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, const std::filesystem::path& path, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": non-numeric field '" << field << "'";
    throw LoadError(msg.str());
  }
  return v;
}

}  // namespace

PointStore load_points(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");

  std::vector<double> coords;
  std::vector<double> weights;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  bool header_pending = options.header;
  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    row.clear();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      row.push_back(parse_field(text.substr(start, comma - start), path, line_no));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (columns == 0) {
      columns = row.size();
      if (options.has_weights && columns < 2) {
        throw LoadError(path.string() + ": weighted files need at least two columns");
      }
    } else if (row.size() != columns) {
      std::ostringstream msg;
      msg << path.string() << ":" << line_no << ": expected " << columns << " fields, found "
          << row.size();
      throw LoadError(msg.str());
    }
    if (options.has_weights) {
      const double w = row.back();
      if (!(w > 0.0)) {
        std::ostringstream msg;
        msg << path.string() << ":" << line_no << ": weight must be positive";
        throw LoadError(msg.str());
      }
      weights.push_back(w);
      row.pop_back();
    }
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (columns == 0) throw LoadError("'" + path.string() + "' contains no points");
  const std::size_t dim = options.has_weights ? columns - 1 : columns;
  if (options.rescale) rescale_unit_cube(coords, dim);
  return PointStore(std::move(coords), dim, std::move(weights));
}

void save_points(const std::filesystem::path& path, const PointStore& points, bool with_weights) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.precision(17);
  const auto perm = points.permutation();
  // Rows go out in original order so a saved tree-ordered store round-trips.
  std::vector<std::size_t> inverse(points.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = i;
  for (std::size_t orig = 0; orig < points.size(); ++orig) {
    const std::size_t i = inverse[orig];
    const auto x = points.point(i);
    for (std::size_t d = 0; d < x.size(); ++d) {
      if (d) out << ',';
      out << x[d];
    }
    if (with_weights) out << ',' << points.weights()[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void rescale_unit_cube(std::vector<double>& coords, std::size_t dim) {
  if (dim == 0 || coords.empty()) return;
  const std::size_t n = coords.size() / dim;
  for (std::size_t d = 0; d < dim; ++d) {
    double lo = coords[d], hi = coords[d];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, coords[i * dim + d]);
      hi = std::max(hi, coords[i * dim + d]);
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      double& v = coords[i * dim + d];
      v = span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
    }
  }
}

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::Uniform;
  if (name == "clusters") return Distribution::Clusters;
  if (name == "duplicates") return Distribution::Duplicates;
  throw std::invalid_argument("unknown distribution '" + name + "'");
}

PointStore generate_points(Distribution dist, std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0 || dim == 0) throw std::invalid_argument("need n >= 1 and dim >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);

  switch (dist) {
    case Distribution::Uniform:
      for (double& v : coords) v = unit(rng);
      break;
    case Distribution::Clusters: {
      constexpr std::size_t kClusters = 5;
      constexpr double kSigma = 0.04;
      std::uniform_real_distribution<double> place(0.15, 0.85);
      std::vector<double> centers(kClusters * dim);
      for (double& c : centers) c = place(rng);
      std::uniform_int_distribution<std::size_t> pick(0, kClusters - 1);
      std::normal_distribution<double> noise(0.0, kSigma);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = pick(rng);
        for (std::size_t d = 0; d < dim; ++d) {
          coords[i * dim + d] = std::clamp(centers[k * dim + d] + noise(rng), 0.0, 1.0);
        }
      }
      break;
    }
    case Distribution::Duplicates: {
      const std::size_t copies = n / 10;
      const std::size_t fresh = n - copies;
      for (std::size_t i = 0; i < fresh * dim; ++i) coords[i] = unit(rng);
      std::uniform_int_distribution<std::size_t> pick(0, fresh - 1);
      for (std::size_t i = fresh; i < n; ++i) {
        const std::size_t src = pick(rng);
        std::copy_n(coords.begin() + static_cast<std::ptrdiff_t>(src * dim), dim,
                    coords.begin() + static_cast<std::ptrdiff_t>(i * dim));
      }
      break;
    }
  }
  return PointStore(std::move(coords), dim);
}

}  // namespace fastgauss
