#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foilex/errors.hpp"
#include "foilex/harness.hpp"

namespace {

enum ExitCode : int { kOk = 0, kInputFailure = 1, kInfeasible = 2, kResourceCap = 3 };

struct ExplainArgs {
  std::string domain;
  std::string problem;
  std::string foils;
  std::string lattice;
  std::optional<double> fraction;
  std::uint64_t seed = 0;
  std::string method = "blind";
  std::string format = "text";
  std::string out;
  std::string policy = "exact";
  bool keep_statics = false;
  std::size_t max_actions = 500000;
};

struct BenchArgs {
  std::string manifest;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::size_t> foil_sizes{1, 2, 4};
  std::vector<std::string> methods{"blind", "astar", "greedy"};
  std::size_t repeat = 1;
  std::string out;
  std::string policy = "exact";
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw foilex::InputError("cannot write " + path);
  file << text;
}

foilex::ResolutionPolicy parse_policy(const std::string& text) {
  if (text == "exact") return foilex::ResolutionPolicy::kExact;
  if (text == "trust-union") return foilex::ResolutionPolicy::kTrustUnion;
  throw foilex::InputError("unknown resolution policy '" + text + "'");
}

int run_explain_command(const ExplainArgs& args) {
  foilex::ExplainRequest request;
  request.domain_file = args.domain;
  request.problem_file = args.problem;
  request.foils_file = args.foils;
  if (!args.lattice.empty()) request.lattice_file = args.lattice;
  request.fraction = args.fraction;
  if (!request.lattice_file && !request.fraction) request.fraction = 0.5;
  request.seed = args.seed;
  request.method = foilex::parse_method(args.method);
  request.search.policy = parse_policy(args.policy);
  request.grounding.compile_statics = !args.keep_statics;
  request.grounding.max_actions = args.max_actions;
  const auto format = foilex::parse_format(args.format);
  auto report = foilex::run_explain(request);
  write_output(args.out, foilex::format_report(report, format));
  return kOk;
}

int run_bench_command(const BenchArgs& args) {
  foilex::BenchOptions options;
  options.manifest = args.manifest;
  options.seeds = args.seeds;
  options.foil_sizes = args.foil_sizes;
  options.methods.clear();
  for (const auto& m : args.methods) options.methods.push_back(foilex::parse_method(m));
  options.repeat = args.repeat;
  options.search.policy = parse_policy(args.policy);
  auto result = foilex::run_bench(options, &std::cerr);
  std::string csv = foilex::bench_csv_header() + "\n";
  for (const auto& row : result.rows) csv += foilex::to_csv_line(row) + "\n";
  write_output(args.out, csv);
  for (const auto& f : result.findings) std::cerr << "finding: " << f << "\n";
  for (const auto& f : result.failures) std::cerr << "failure: " << f << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explain a plan against user foils by searching a lattice of model abstractions"};
  app.require_subcommand(1);

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Explain one problem against a foil file");
  explain->add_option("--domain", ex.domain, "PDDL domain file")->required();
  explain->add_option("--problem", ex.problem, "PDDL problem file")->required();
  explain->add_option("--foils", ex.foils, "JSON foil file")->required();
  auto* lattice_opt = explain->add_option("--lattice", ex.lattice, "JSON lattice configuration");
  explain->add_option("--fraction", ex.fraction, "Fraction of fluent predicates to abstract")
      ->check(CLI::Range(0.0, 1.0))
      ->excludes(lattice_opt);
  explain->add_option("--seed", ex.seed, "Seed for random lattice generation");
  explain->add_option("--method", ex.method, "blind | astar | greedy | oracle")
      ->check(CLI::IsMember({"blind", "astar", "heuristic", "greedy", "oracle"}));
  explain->add_option("--format", ex.format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  explain->add_option("--out", ex.out, "Output file (default stdout)");
  explain->add_option("--policy", ex.policy, "exact | trust-union")
      ->check(CLI::IsMember({"exact", "trust-union"}));
  explain->add_flag("--keep-statics", ex.keep_statics, "Do not compile away static fluents");
  explain->add_option("--max-actions", ex.max_actions, "Grounding cap");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run the benchmark suite and write CSV rows");
  bench->add_option("--manifest", bench_args.manifest, "Suite manifest (JSON)")->required();
  bench->add_option("--seeds", bench_args.seeds, "Seeds")->delimiter(',');
  bench->add_option("--foil-sizes", bench_args.foil_sizes, "Foil set sizes")->delimiter(',');
  bench->add_option("--methods", bench_args.methods, "Methods")->delimiter(',');
  bench->add_option("--repeat", bench_args.repeat, "Timing repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_args.out, "CSV output file (default stdout)");
  bench->add_option("--policy", bench_args.policy, "exact | trust-union")
      ->check(CLI::IsMember({"exact", "trust-union"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputFailure;
  }

  try {
    if (*explain) return run_explain_command(ex);
    return run_bench_command(bench_args);
  } catch (const foilex::InconsistentFoilsError& e) {
    std::cerr << "error: inconsistent foils: " << e.what() << "\n";
    return kInfeasible;
  } catch (const foilex::InfeasibleExplanationError& e) {
    std::cerr << "error: no explanation exists: " << e.what() << "\n";
    return kInfeasible;
  } catch (const foilex::ResourceLimitError& e) {
    std::cerr << "error: resource limit: " << e.what() << "\n";
    return kResourceCap;
  } catch (const foilex::UnsupportedFeatureError& e) {
    std::cerr << "error: unsupported feature: " << e.what() << "\n";
    return kInputFailure;
  } catch (const foilex::ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kInputFailure;
  } catch (const foilex::UnknownActionError& e) {
    std::cerr << "error: unknown action: " << e.what() << "\n";
    return kInputFailure;
  } catch (const foilex::GroundingError& e) {
    std::cerr << "error: grounding: " << e.what() << "\n";
    return kInputFailure;
  } catch (const foilex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputFailure;
  }
}
