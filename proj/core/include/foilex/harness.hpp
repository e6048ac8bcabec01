#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "foilex/explain.hpp"
#include "foilex/io.hpp"
#include "foilex/lattice.hpp"
#include "foilex/render.hpp"

namespace foilex {

enum class OutputFormat { kText, kJson, kCsv };

/// Accepts "text", "json", "csv". Throws InputError.
OutputFormat parse_format(std::string_view text);

struct ExplainRequest {
  std::filesystem::path domain_file;
  std::filesystem::path problem_file;
  std::filesystem::path foils_file;
  std::optional<std::filesystem::path> lattice_file;
  std::optional<double> fraction;
  std::uint64_t seed = 0;
  Method method = Method::kBlind;
  SearchOptions search;
  pddl::GroundingOptions grounding;
};

struct ExplainReport {
  std::string domain;
  std::string problem;
  std::vector<std::string> warnings;
  std::vector<std::string> unit_ids;
  std::size_t total_cost = 0;
  std::size_t plan_length = 0;
  std::optional<bool> plan_valid;
  std::vector<std::string> foil_names;
  std::vector<std::vector<std::string>> mmin;
  std::size_t k = 0;
  Method method = Method::kBlind;
  Explanation explanation;
  std::vector<ModelUpdateMessage> messages;
  double seconds = 0.0;
};

/// Loads, grounds, builds the lattice, computes M_min and runs one method.
/// An empty foil set is an InputError.
ExplainReport run_explain(const ExplainRequest& request);

std::string format_report(const ExplainReport& report, OutputFormat format);

/// Seeded sample of `size` foils without replacement, in pool order. Every
/// pool member must be valid in the fully abstract model and invalid in the
/// base model; violations are InputErrors naming the foil.
FoilSet foil_pool_sample(const LatticeSpec& lattice, const FoilSet& pool, std::size_t size,
                         std::uint64_t seed);

struct BenchmarkRow {
  std::string domain;
  std::string problem;
  /// Empty for per-(domain, |F|, method) averages.
  std::optional<std::uint64_t> seed;
  double units = 0;
  double total_cost = 0;
  std::size_t foils = 0;
  std::string method;
  double cost = 0;
  double size = 0;
  double k = 0;
  double seconds = 0;

  bool average() const { return !seed.has_value(); }
  bool operator==(const BenchmarkRow&) const = default;
};

std::string bench_csv_header();
std::string to_csv_line(const BenchmarkRow& row);
/// Parses text produced by bench_csv_header + to_csv_line. Throws InputError.
std::vector<BenchmarkRow> parse_bench_csv(std::string_view text);

/// Means per (domain, |F|, method), in order of first appearance.
std::vector<BenchmarkRow> average_rows(const std::vector<BenchmarkRow>& rows);

struct BenchOptions {
  std::filesystem::path manifest;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::size_t> foil_sizes{1, 2, 4};
  std::vector<Method> methods{Method::kBlind, Method::kAStar, Method::kGreedy};
  std::size_t repeat = 1;
  SearchOptions search;
};

struct BenchResult {
  /// Per-run rows followed by the averages.
  std::vector<BenchmarkRow> rows;
  /// Violations of the per-row checks.
  std::vector<std::string> findings;
  /// Problems or runs that failed and were skipped.
  std::vector<std::string> failures;
};

/// Runs every manifest problem x seed x |F| x method. Timing covers the
/// search call only. Progress goes to `log` when given.
BenchResult run_bench(const BenchOptions& options, std::ostream* log = nullptr);

}  // namespace foilex
