#include <gtest/gtest.h>

#include <random>

#include "foilex/errors.hpp"
#include "foilex/explain.hpp"
#include "foilex/io.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace foilex {
namespace {

const std::string kData = FOILEX_DATA_DIR;

struct Fixture {
  std::shared_ptr<const PlanningModel> model;
  LatticeSpec lattice;
  FoilSet foils;

  Fixture(const std::string& dir, const std::string& problem, const std::string& foils_file,
          const std::string& lattice_file)
      : model(load_model(dir + "/domain.pddl", dir + "/" + problem).model),
        lattice(make_lattice(model, parse_lattice_file(read_text_file(dir + "/" + lattice_file)), 0)),
        foils(parse_foil_file(read_text_file(dir + "/" + foils_file)).foils) {}
};

Fixture mini_rover() {
  return Fixture(kData + "/mini_rover", "problem.pddl", "foils.json", "lattice.json");
}

TEST(Method, Parse) {
  EXPECT_EQ(parse_method("blind"), Method::kBlind);
  EXPECT_EQ(parse_method("astar"), Method::kAStar);
  EXPECT_EQ(parse_method("heuristic"), Method::kAStar);
  EXPECT_EQ(parse_method("greedy"), Method::kGreedy);
  EXPECT_EQ(parse_method("oracle"), Method::kOracle);
  EXPECT_THROW(parse_method("dfs"), InputError);
  EXPECT_STREQ(to_string(Method::kAStar), "astar");
}

TEST(Explain, MiniRoverEveryMethod) {
  auto f = mini_rover();
  ExplanationProblem problem(f.lattice, f.foils);
  for (Method m : {Method::kBlind, Method::kAStar, Method::kGreedy, Method::kOracle}) {
    Explanation e = explain(problem, m);
    EXPECT_EQ(e.ids, (std::vector<std::string>{"battery_level_above_75_perc"})) << to_string(m);
    EXPECT_EQ(e.cost, 3U);
    EXPECT_TRUE(e.verified);
    EXPECT_EQ(e.unit_costs.at("battery_level_above_75_perc"), 3U);
  }
}

TEST(Explain, MiniRoverResolutionSets) {
  auto f = mini_rover();
  ExplanationProblem problem(f.lattice, f.foils);
  const std::size_t b75 = *f.lattice.find("battery_level_above_75_perc");
  const std::size_t b25 = *f.lattice.find("battery_level_above_25_perc");
  EXPECT_EQ(resolution_set(problem.validator(), problem.mmin(), b75), FoilMask{1});
  // b25 is kept in one member, so the strict definition does not apply.
  EXPECT_THROW(resolution_set(problem.validator(), problem.mmin(), b25), InputError);
  EXPECT_EQ(problem.pair_count(), 2U);
  EXPECT_EQ(problem.single_cover(b75).count(), 2U);
  EXPECT_EQ(problem.single_cover(b25).count(), 1U);
  EXPECT_EQ(problem.cover_bound_k(), 2U);
  EXPECT_EQ(problem.relevant_units(), f.lattice.spec_of({"battery_level_above_25_perc",
                                                         "battery_level_above_50_perc",
                                                         "battery_level_above_75_perc"}));
}

TEST(Explain, ConcretizingEverythingExplains) {
  auto f = mini_rover();
  ExplanationProblem problem(f.lattice, f.foils);
  EXPECT_TRUE(verify_materialized(f.lattice, problem.mmin(), f.foils, f.lattice.all()));
  EXPECT_FALSE(verify_materialized(f.lattice, problem.mmin(), f.foils, UnitSet()));
  EXPECT_TRUE(problem.open_pairs(f.lattice.all()).none());
  EXPECT_EQ(problem.open_pairs(UnitSet()).count(), 2U);
}

TEST(Explain, SyntacticCoverOverApproximates) {
  auto f = mini_rover();
  ExplanationProblem problem(f.lattice, f.foils);
  const std::size_t full = *f.lattice.find("full_store");
  const std::size_t b75 = *f.lattice.find("battery_level_above_75_perc");
  EXPECT_EQ(problem.syntactic_cover(b75), FoilMask{1});
  EXPECT_EQ(problem.syntactic_cover(full), FoilMask{0});
  EXPECT_GT(heuristic_estimate(problem, UnitSet(), FoilMask{1}), 0U);
  EXPECT_EQ(heuristic_estimate(problem, UnitSet(), FoilMask{0}), 0U);
}

TEST(Explain, RoverSoilExplanation) {
  Fixture f(kData + "/rover", "pfile01.pddl", "pfile01_foils.json", "pfile01_lattice.json");
  EXPECT_EQ(f.lattice.size(), 12U);
  ExplanationProblem problem(f.lattice, f.foils);
  ASSERT_EQ(problem.mmin().size(), 1U);
  EXPECT_EQ(f.lattice.ids(problem.mmin()[0]), (std::vector<std::string>{"have_soil_analysis"}));
  for (Method m : {Method::kBlind, Method::kAStar, Method::kGreedy}) {
    Explanation e = explain(problem, m);
    EXPECT_EQ(e.ids, (std::vector<std::string>{"have_soil_analysis"}));
    EXPECT_EQ(e.cost, 2U);
    EXPECT_LT(10 * e.cost, f.lattice.total_cost());
  }
}

TEST(Explain, OracleCap) {
  Fixture f(kData + "/rover", "pfile01.pddl", "pfile01_foils.json", "pfile01_lattice.json");
  ExplanationProblem problem(f.lattice, f.foils);
  SearchOptions options;
  options.oracle_cap = 8;
  EXPECT_THROW(brute_force_oracle(problem, options), ResourceLimitError);
}

TEST(Explain, BlindAndAStarWithoutHeuristicAreOptimal) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 40; ++i) {
    auto inst = testing::random_instance(rng());
    ExplanationProblem problem(*inst.lattice, inst.foils);
    auto best = testing::brute_optimum(*inst.lattice, problem.mmin(), inst.foils);
    Explanation blind = blind_search(problem);
    SearchOptions no_h;
    no_h.use_heuristic = false;
    Explanation ucs = astar_search(problem, no_h);
    EXPECT_EQ(blind.cost, best.cost);
    EXPECT_EQ(ucs.cost, best.cost);
    EXPECT_EQ(blind.units, ucs.units);
    EXPECT_TRUE(blind.verified);
    EXPECT_TRUE(testing::brute_explains(*inst.lattice, problem.mmin(), inst.foils, blind.units));
  }
}

TEST(Explain, EveryMethodReturnsAVerifiedExplanation) {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 40; ++i) {
    auto inst = testing::random_instance(rng());
    ExplanationProblem problem(*inst.lattice, inst.foils);
    for (Method m : {Method::kAStar, Method::kGreedy}) {
      Explanation e = explain(problem, m);
      EXPECT_TRUE(e.verified) << to_string(m);
      EXPECT_TRUE(testing::brute_explains(*inst.lattice, problem.mmin(), inst.foils, e.units));
      EXPECT_EQ(e.cost, inst.lattice->cost(e.units));
    }
  }
}

TEST(Explain, TrustUnionIsStillVerified) {
  std::mt19937_64 rng(303);
  SearchOptions trust;
  trust.policy = ResolutionPolicy::kTrustUnion;
  for (int i = 0; i < 30; ++i) {
    auto inst = testing::random_instance(rng());
    ExplanationProblem problem(*inst.lattice, inst.foils);
    Explanation e = blind_search(problem, trust);
    EXPECT_EQ(e.verified,
              testing::brute_explains(*inst.lattice, problem.mmin(), inst.foils, e.units));
    EXPECT_GE(e.cost, blind_search(problem).cost);
  }
}

TEST(Explain, ProblemWithGivenMminSkipsRecomputation) {
  auto f = mini_rover();
  ExplanationProblem full(f.lattice, f.foils);
  ExplanationProblem reuse(f.lattice, f.foils, full.mmin());
  EXPECT_EQ(reuse.mmin(), full.mmin());
  EXPECT_EQ(explain(reuse, Method::kGreedy).units, explain(full, Method::kGreedy).units);
}

}  // namespace
}  // namespace foilex
