#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fastgauss/dataset.hpp"
#include "fastgauss/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_multipliers(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad multiplier '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-tree Gaussian summation"};
  app.require_subcommand(1);

  std::string ref_path, query_path, out_path, format = "table";
  std::string h_star = "auto", multipliers, algos;
  bool weights = false, rescale = false, header = false, verify = false;
  double epsilon = 0.0;
  std::size_t leaf = fastgauss::kDefaultLeafThreshold;
  int plimit = 0;
  std::uint64_t seed = 0;

  auto* sweep = app.add_subcommand("sweep", "Time algorithms over a bandwidth sweep");
  sweep->add_option("--ref", ref_path, "Reference points (CSV)")->required();
  sweep->add_option("--query", query_path, "Query points (CSV); default: the references");
  sweep->add_flag("--weights", weights, "Last reference column is a positive weight");
  sweep->add_flag("--rescale", rescale, "Min-max rescale every coordinate into [0, 1]");
  sweep->add_flag("--header", header, "Skip the first line of each input");
  sweep->add_option("--epsilon", epsilon, "Per-query relative error")->required();
  sweep->add_option("--h-star", h_star, "Base bandwidth, or 'auto' for cross-validation");
  sweep->add_option("--multipliers", multipliers, "Comma-separated multiples of h*");
  sweep->add_option("--algos", algos, "Comma-separated: naive,dfd,dfdo,dito")->required();
  sweep->add_option("--leaf", leaf, "Leaf size");
  sweep->add_option("--plimit", plimit, "Series order cap (0: by dimension)");
  sweep->add_flag("--verify", verify, "Compare against the exhaustive sum (exit 2 on violation)");
  sweep->add_option("--out", out_path, "Report file; default: stdout");
  sweep->add_option("--format", format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  sweep->add_option("--seed", seed, "Seed for bandwidth selection");

  std::string dist;
  std::size_t n = 0, dim = 0;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("--dist", dist, "uniform, clusters or duplicates")
      ->required()
      ->check(CLI::IsMember({"uniform", "clusters", "duplicates"}));
  gen->add_option("--n", n, "Number of points")->required()->check(CLI::PositiveNumber);
  gen->add_option("--dim", dim, "Dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output CSV")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      const auto points = fastgauss::generate_points(fastgauss::parse_distribution(dist), n, dim,
                                                     gen_seed);
      fastgauss::save_points(gen_out, points);
      return kOk;
    }

    fastgauss::SweepSpec spec;
    spec.reference_path = ref_path;
    if (!query_path.empty()) spec.query_path = query_path;
    spec.weights = weights;
    spec.rescale = rescale;
    spec.header = header;
    spec.epsilon = epsilon;
    if (h_star != "auto") {
      std::size_t used = 0;
      spec.h_star = std::stod(h_star, &used);
      if (used != h_star.size()) throw std::invalid_argument("bad --h-star '" + h_star + "'");
    }
    if (!multipliers.empty()) spec.multipliers = parse_multipliers(multipliers);
    spec.algorithms.clear();
    for (const auto& name : split_list(algos)) {
      spec.algorithms.push_back(fastgauss::parse_algorithm(name));
    }
    spec.leaf_threshold = leaf;
    spec.plimit = plimit;
    spec.verify = verify;
    spec.seed = seed;

    const auto report = fastgauss::run_sweep(spec);
    const auto fmt = fastgauss::parse_report_format(format);
    if (out_path.empty()) {
      fastgauss::emit_report(report, fmt, std::cout);
    } else {
      fastgauss::emit_report(report, fmt, out_path);
    }
    if (verify && report.has_violation()) {
      std::cerr << "fastgauss: relative error exceeded epsilon\n";
      return kVerifyFailed;
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "fastgauss: " << e.what() << '\n';
    return kUsage;
  }
}
