#include <gtest/gtest.h>

#include <random>

#include "foilex/abstraction.hpp"
#include "foilex/errors.hpp"
#include "foilex/execution.hpp"
#include "foilex/io.hpp"
#include "model_builder.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace foilex {
namespace {

using testing::ModelBuilder;

const std::string kData = FOILEX_DATA_DIR;

std::shared_ptr<const PlanningModel> mini_rover() {
  return load_model(kData + "/mini_rover/domain.pddl", kData + "/mini_rover/problem.pddl").model;
}

const Foil kPlan{"plan", {"navigate_w0_lander", "reset_at_lander", "navigate_lander_w1",
                          "sample_rock_store0_w1"}};
const Foil kFoil{"foil", {"navigate_w0_w1", "navigate_lander_w1", "sample_rock_store0_w1"}};

TEST(Execution, MiniRoverPlanValidFoilInvalid) {
  auto m = mini_rover();
  EXPECT_TRUE(validate_plan(*m, kPlan));
  EXPECT_FALSE(validate_plan(*m, kFoil));
  EXPECT_TRUE(validate_plan_nd(*m, kPlan));
  EXPECT_FALSE(validate_plan_nd(*m, kFoil));
}

TEST(Execution, UnsatisfiedPreconditionIsANoOp) {
  auto m = mini_rover();
  State s = initial_state(*m);
  State t = apply_action(s, m->action("sample_rock_store0_w1"));
  EXPECT_EQ(s, t);
}

TEST(Execution, ConditionalDeleteFires) {
  auto m = mini_rover();
  State s = apply_action(initial_state(*m), m->action("navigate_w0_w1"));
  auto b50 = *m->table().find_by_name("battery_level_above_50_perc");
  EXPECT_FALSE(s.test(b50));
  State t = apply_action(initial_state(*m), m->action("navigate_w0_lander"));
  EXPECT_TRUE(t.test(b50));
}

TEST(Execution, UnknownActionNamed) {
  auto m = mini_rover();
  try {
    validate_plan(*m, Foil{"f", {"fly_w0_w1"}});
    FAIL();
  } catch (const UnknownActionError& e) {
    EXPECT_EQ(e.name(), "fly_w0_w1");
  }
}

TEST(Execution, EmptyPlanChecksGoalInInit) {
  ModelBuilder b({"g"});
  EXPECT_TRUE(validate_plan(*b.build({"g"}, {"g"}), Foil{}));
  EXPECT_FALSE(validate_plan(*b.build({}, {"g"}), Foil{}));
}

TEST(Execution, DeletesWinAcrossClauses) {
  ModelBuilder b({"f", "g"});
  b.action("a", {}, {b.clause({}, {"f"}, {}), b.clause({}, {"g"}, {"f"})});
  auto m = b.build({}, {"f"});
  EXPECT_FALSE(validate_plan(*m, Foil{"x", {"a"}}));
}

TEST(Execution, ConditionsReadThePreState) {
  ModelBuilder b({"f", "g"});
  b.action("a", {}, {b.clause({}, {"f"}, {}), b.clause({"f"}, {"g"}, {})});
  auto m = b.build({}, {"g"});
  EXPECT_FALSE(validate_plan(*m, Foil{"x", {"a"}}));
  EXPECT_TRUE(validate_plan(*m, Foil{"x", {"a", "a"}}));
}

TEST(Execution, DeterministicApiRejectsNd) {
  ModelBuilder b({"g"});
  b.action("a", {}, {b.clause({}, {"g"}, {}, true)});
  auto m = b.build({}, {"g"});
  EXPECT_THROW(validate_plan(*m, Foil{"x", {"a"}}), InputError);
  EXPECT_THROW(apply_action(initial_state(*m), m->action("a")), InputError);
}

TEST(Execution, OptimisticNdFiresWhenHelpful) {
  ModelBuilder b({"g", "h"});
  b.action("add", {}, {b.clause({}, {"g"}, {}, true)});
  b.action("del", {}, {b.clause({}, {}, {"g"}, true)});
  auto m = b.build({}, {"g"});
  EXPECT_TRUE(validate_plan_nd(*m, Foil{"x", {"add"}}));
  EXPECT_TRUE(validate_plan_nd(*m, Foil{"x", {"add", "del"}}));
  EXPECT_FALSE(validate_plan_nd(*m, Foil{"x", {"del"}}));
}

TEST(Execution, NdClauseIsAtomic) {
  ModelBuilder b({"g", "h"});
  b.action("a", {}, {b.clause({}, {"g"}, {"h"}, true)});
  auto m = b.build({"h"}, {"g", "h"});
  EXPECT_FALSE(validate_plan_nd(*m, Foil{"x", {"a"}}));
}

TEST(Execution, BeliefCapIsAResourceError) {
  ModelBuilder b({"p", "q", "r", "g"});
  b.action("a", {}, {b.clause({}, {"p"}, {}, true), b.clause({}, {"q"}, {}, true),
                     b.clause({}, {"r"}, {}, true)});
  auto m = b.build({}, {"g"});
  ExecutionOptions tight;
  tight.max_belief_states = 4;
  EXPECT_THROW(validate_plan_nd(*m, Foil{"x", {"a"}}, tight), ResourceLimitError);
  EXPECT_FALSE(validate_plan_nd(*m, Foil{"x", {"a"}}));
}

TEST(Execution, BeliefIsDeduplicated) {
  ModelBuilder b({"p", "g"});
  b.action("a", {}, {b.clause({}, {"p"}, {}, true), b.clause({}, {"p"}, {}, true)});
  auto m = b.build({}, {"g"});
  std::vector<State> belief{initial_state(*m)};
  expand_belief(belief, m->action("a"));
  EXPECT_EQ(belief.size(), 2U);
  EXPECT_FALSE(any_satisfies(belief, m->goal()));
}

TEST(Execution, AgreesWithChoiceTreeOnRandomNdModels) {
  std::mt19937_64 rng(3);
  testing::RandomModelOptions options;
  options.nondeterministic = 0.4;
  for (int i = 0; i < 150; ++i) {
    auto rm = testing::random_model(rng, options);
    for (int k = 0; k < 5; ++k) {
      Foil f = testing::random_walk(rng, *rm.model, 1 + rng() % 5);
      EXPECT_EQ(validate_plan_nd(*rm.model, f), testing::naive_valid(*rm.model, {}, f));
    }
  }
}

}  // namespace
}  // namespace foilex
