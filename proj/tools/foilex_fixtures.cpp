// Development tool that produces plans, lattices and foil pools for the
// committed benchmark fixtures. Not part of the library surface.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "foilex/abstraction.hpp"
#include "foilex/errors.hpp"
#include "foilex/io.hpp"
#include "foilex/lattice.hpp"
#include "planner.hpp"

namespace {

using foilex::Foil;
using foilex::FoilSet;
using foilex::PlanningModel;
using foilex::ResolvedPlan;

std::vector<std::string> names_of(const PlanningModel& model, const ResolvedPlan& plan) {
  std::vector<std::string> out;
  for (std::size_t i : plan) out.push_back(model.actions()[i].name);
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw foilex::InputError("cannot write " + path);
  out << text;
}

nlohmann::json lattice_json(const foilex::LatticeSpec& lattice) {
  nlohmann::json units = nlohmann::json::object();
  for (const auto& u : lattice.units()) units[u.id] = u.members;
  return {{"granularity", "predicate"}, {"units", units}};
}

struct PoolArgs {
  std::string domain;
  std::string problem;
  std::string lattice;
  double fraction = 0.5;
  std::uint64_t seed = 1;
  std::size_t size = 8;
  std::size_t attempts = 400;
  std::string out;
  std::string lattice_out;
};

int run_plan(const std::string& domain, const std::string& problem) {
  auto loaded = foilex::load_model(domain, problem);
  auto plan = foilex::fixtures::find_plan(*loaded.model);
  if (!plan) {
    std::cerr << "no plan found\n";
    return 2;
  }
  for (const auto& n : names_of(*loaded.model, *plan)) std::cout << n << "\n";
  return 0;
}

int run_pool(const PoolArgs& args) {
  auto loaded = foilex::load_model(args.domain, args.problem);
  const PlanningModel& base = *loaded.model;
  foilex::LatticeSource source;
  if (!args.lattice.empty()) {
    source = foilex::parse_lattice_file(foilex::read_text_file(args.lattice));
  } else {
    source.fraction = args.fraction;
    source.seed = args.seed;
  }
  const auto lattice = foilex::make_lattice(loaded.model, source, args.seed);

  auto plan = foilex::fixtures::find_plan(base);
  if (!plan) throw foilex::InputError("the robot model has no plan within the expansion cap");
  const PlanningModel top =
      foilex::project_model(base, lattice.removal_mask(lattice.all()));

  std::mt19937_64 rng(args.seed);
  std::set<std::vector<std::string>> seen{names_of(base, *plan)};
  FoilSet pool;
  auto offer = [&](const ResolvedPlan& candidate) {
    auto names = names_of(base, candidate);
    if (names.empty() || !seen.insert(names).second) return;
    Foil foil{"", names};
    if (foilex::validate_plan(base, foil)) return;
    if (!foilex::validate_plan_nd(top, foil)) return;
    foil.name = "f" + std::to_string(pool.size() + 1);
    pool.push_back(std::move(foil));
  };

  for (std::size_t attempt = 0; attempt < args.attempts && pool.size() < args.size; ++attempt) {
    switch (attempt % 3) {
      case 0: {
        // Drop a few steps of the robot plan.
        ResolvedPlan p = *plan;
        std::size_t cut = 1 + rng() % std::min<std::size_t>(3, std::max<std::size_t>(1, p.size() - 1));
        for (std::size_t i = 0; i < cut && p.size() > 1; ++i) p.erase(p.begin() + static_cast<long>(rng() % p.size()));
        offer(p);
        break;
      }
      default: {
        // Plan in a random abstraction of the lattice.
        foilex::UnitSet dropped;
        for (std::size_t u = 0; u < lattice.size(); ++u) {
          if (rng() % 2) dropped = dropped.with(u);
        }
        if (dropped.empty()) dropped = foilex::UnitSet::single(rng() % lattice.size());
        const PlanningModel abstract = foilex::project_model(base, lattice.removal_mask(dropped));
        foilex::fixtures::PlannerOptions opts;
        opts.seed = rng() | 1;
        opts.max_expansions = 200'000;
        if (auto p = foilex::fixtures::find_plan(abstract, opts)) offer(*p);
        break;
      }
    }
  }

  nlohmann::json doc;
  doc["plan"] = names_of(base, *plan);
  doc["foils"] = nlohmann::json::array();
  for (const auto& f : pool) doc["foils"].push_back({{"name", f.name}, {"actions", f.actions}});
  write_file(args.out, doc.dump(1) + "\n");
  if (!args.lattice_out.empty()) write_file(args.lattice_out, lattice_json(lattice).dump(1) + "\n");
  std::cerr << loaded.problem_name << ": plan " << plan->size() << " steps, " << lattice.size()
            << " units, " << pool.size() << " foils\n";
  return pool.size() < args.size ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixture generator for foilex benchmark suites"};
  app.require_subcommand(1);

  std::string domain, problem;
  auto* plan = app.add_subcommand("plan", "Print a plan for the robot model");
  plan->add_option("--domain", domain)->required();
  plan->add_option("--problem", problem)->required();

  PoolArgs pool_args;
  auto* pool = app.add_subcommand("pool", "Write a foil pool and the lattice it was built against");
  pool->add_option("--domain", pool_args.domain)->required();
  pool->add_option("--problem", pool_args.problem)->required();
  pool->add_option("--lattice", pool_args.lattice, "Existing lattice file");
  pool->add_option("--fraction", pool_args.fraction);
  pool->add_option("--seed", pool_args.seed);
  pool->add_option("--size", pool_args.size);
  pool->add_option("--attempts", pool_args.attempts);
  pool->add_option("--out", pool_args.out);
  pool->add_option("--lattice-out", pool_args.lattice_out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*plan) return run_plan(domain, problem);
    return run_pool(pool_args);
  } catch (const foilex::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
