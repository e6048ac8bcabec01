#include <gtest/gtest.h>

#include <algorithm>

#include "foilex/errors.hpp"
#include "foilex/io.hpp"
#include "foilex/pddl.hpp"

namespace foilex::pddl {
namespace {

const std::string kData = FOILEX_DATA_DIR;

const char* kGroceryDomain = R"(
(define (domain grocery)
  (:requirements :strips :typing :action-costs)
  (:types item storage pose traj)
  (:predicates (is_pickup_pose ?u - pose ?x - item)
               (is_collision_free_traj ?x - item ?y - storage ?u - pose ?v - traj)
               (in ?x - item ?y - storage)
               (handempty)
               (holding ?x - item))
  (:functions (total-cost) - number)
  (:action pickup
    :parameters (?x - item ?y - storage ?u - pose ?v - traj)
    :precondition (and (is_pickup_pose ?u ?x)
                       (is_collision_free_traj ?x ?y ?u ?v)
                       (in ?x ?y)
                       (handempty))
    :effect (and (not (handempty)) (not (in ?x ?y)) (holding ?x)
                 (increase (total-cost) 1))))
)";

const ActionSchema& schema(const DomainAst& d, const std::string& name) {
  auto it = std::find_if(d.actions.begin(), d.actions.end(),
                         [&](const ActionSchema& a) { return a.name == name; });
  EXPECT_NE(it, d.actions.end()) << name;
  return *it;
}

TEST(ParseDomain, PickupSchemaHasFourPreconditions) {
  DomainAst d = parse_domain(kGroceryDomain);
  const auto& pickup = schema(d, "pickup");
  ASSERT_EQ(pickup.precondition.size(), 4U);
  EXPECT_EQ(pickup.precondition[0].predicate, "is_pickup_pose");
  EXPECT_EQ(pickup.precondition[1].predicate, "is_collision_free_traj");
  EXPECT_EQ(pickup.parameters.size(), 4U);
  ASSERT_EQ(pickup.effects.size(), 1U);
  EXPECT_EQ(pickup.effects[0].add.size(), 1U);
  EXPECT_EQ(pickup.effects[0].del.size(), 2U);
}

TEST(ParseDomain, CostEffectsDroppedWithWarning) {
  DomainAst d = parse_domain(kGroceryDomain);
  ASSERT_FALSE(d.warnings.empty());
  EXPECT_NE(d.warnings.front().find("ignored 1"), std::string::npos) << d.warnings.front();
}

TEST(ParseDomain, ZeroActions) {
  DomainAst d = parse_domain("(define (domain empty) (:requirements :strips) (:predicates (p)))");
  EXPECT_EQ(d.name, "empty");
  EXPECT_TRUE(d.actions.empty());
  EXPECT_EQ(d.predicates.size(), 1U);
}

TEST(ParseDomain, MiniRoverHasSixSchemas) {
  DomainAst d = parse_domain(read_text_file(kData + "/mini_rover/domain.pddl"));
  ASSERT_EQ(d.actions.size(), 6U);
  EXPECT_EQ(d.predicates.size(), 14U);
  const auto& nav = schema(d, "navigate");
  EXPECT_EQ(nav.precondition.size(), 3U);
  ASSERT_EQ(nav.effects.size(), 2U);
  EXPECT_FALSE(nav.effects[0].conditional);
  EXPECT_TRUE(nav.effects[1].conditional);
  EXPECT_EQ(nav.effects[1].condition.size(), 2U);
  EXPECT_EQ(nav.effects[1].del.size(), 1U);
  const auto& rock = schema(d, "sample_rock");
  EXPECT_EQ(rock.precondition.size(), 5U);
  EXPECT_EQ(rock.effects[0].add.size(), 2U);
  EXPECT_EQ(rock.effects[0].del.size(), 2U);
  const auto& drop = schema(d, "drop");
  EXPECT_TRUE(drop.precondition.empty());
  ASSERT_EQ(drop.effects.size(), 1U);
  EXPECT_TRUE(drop.effects[0].conditional);
  EXPECT_EQ(d.types.at("lander"), "location");
}

TEST(ParseDomain, CaseIsFolded) {
  DomainAst d = parse_domain("(DEFINE (DOMAIN Up) (:PREDICATES (P ?X)) "
                             "(:ACTION Go :PARAMETERS (?X) :PRECONDITION (P ?X) :EFFECT (NOT (P ?X))))");
  EXPECT_EQ(d.name, "up");
  EXPECT_EQ(d.actions.at(0).name, "go");
  EXPECT_EQ(d.actions.at(0).precondition.at(0).terms.at(0), "?x");
}

TEST(ParseDomain, SyntaxErrorReportsLineAndColumn) {
  try {
    parse_domain("(define (domain d)\n  (:predicates (p)\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 1U);
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(ParseDomain, UnsupportedRequirementIsNamed) {
  try {
    parse_domain("(define (domain d) (:requirements :durative-actions) (:predicates (p)))");
    FAIL() << "expected UnsupportedFeatureError";
  } catch (const UnsupportedFeatureError& e) {
    EXPECT_EQ(e.feature(), ":durative-actions");
  }
}

TEST(ParseDomain, RejectsNegativePreconditions) {
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p)) "
                            "(:action a :parameters () :precondition (not (p)) :effect (p)))"),
               UnsupportedFeatureError);
}

TEST(ParseDomain, RejectsDisjunctionAndQuantifiers) {
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p) (q)) "
                            "(:action a :parameters () :precondition (or (p) (q)) :effect (p)))"),
               UnsupportedFeatureError);
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p ?x)) "
                            "(:action a :parameters () :precondition (and) "
                            ":effect (forall (?x) (p ?x))))"),
               UnsupportedFeatureError);
}

TEST(ParseDomain, RejectsNumericFluentsWithoutActionCosts) {
  EXPECT_THROW(parse_domain("(define (domain d) (:requirements :strips) (:predicates (p)) "
                            "(:functions (fuel)) )"),
               UnsupportedFeatureError);
}

TEST(ParseDomain, RejectsUndeclaredPredicateAndUnboundVariable) {
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p)) "
                            "(:action a :parameters () :precondition (q) :effect (p)))"),
               ParseError);
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p ?x)) "
                            "(:action a :parameters () :precondition (and) :effect (p ?y)))"),
               ParseError);
}

TEST(ParseDomain, RejectsWrongArity) {
  EXPECT_THROW(parse_domain("(define (domain d) (:predicates (p ?x)) "
                            "(:action a :parameters (?x) :precondition (p ?x ?x) :effect (p ?x)))"),
               ParseError);
}

TEST(ParseProblem, GoalEqualToInit) {
  ProblemAst p = parse_problem("(define (problem p) (:domain d) (:objects a b) "
                               "(:init (at a) (at b)) (:goal (and (at a) (at b))))");
  EXPECT_EQ(p.init.size(), 2U);
  EXPECT_EQ(p.goal.size(), 2U);
  EXPECT_EQ(p.init, p.goal);
  EXPECT_EQ(p.objects.size(), 2U);
  EXPECT_EQ(p.objects[0].type, "object");
}

TEST(ParseProblem, EmptyGoalConjunctionWarns) {
  ProblemAst p = parse_problem("(define (problem p) (:domain d) (:init (x)) (:goal (and)))");
  EXPECT_TRUE(p.goal.empty());
  ASSERT_FALSE(p.warnings.empty());
  EXPECT_NE(p.warnings.front().find("empty"), std::string::npos);
}

TEST(ParseProblem, MissingGoalIsAnError) {
  EXPECT_THROW(parse_problem("(define (problem p) (:domain d) (:init (x)))"), ParseError);
}

TEST(ParseProblem, MiniRoverInit) {
  ProblemAst p = parse_problem(read_text_file(kData + "/mini_rover/problem.pddl"));
  EXPECT_EQ(p.name, "mini-rover-1");
  EXPECT_EQ(p.init.size(), 16U);
  auto has = [&](const std::string& pred) {
    return std::any_of(p.init.begin(), p.init.end(), [&](const Atom& a) { return a.predicate == pred; });
  };
  EXPECT_TRUE(has("battery_level_above_25_perc"));
  EXPECT_TRUE(has("battery_level_above_50_perc"));
  EXPECT_FALSE(has("battery_level_above_75_perc"));
  ASSERT_EQ(p.goal.size(), 1U);
  EXPECT_EQ(p.goal[0].predicate, "have_rock_analysis");
}

TEST(ParseProblem, NumericInitFactsAreDroppedWithWarning) {
  ProblemAst p = parse_problem("(define (problem p) (:domain d) "
                               "(:init (x) (= (total-cost) 0)) (:goal (x)) (:metric minimize (total-cost)))");
  EXPECT_EQ(p.init.size(), 1U);
  EXPECT_GE(p.warnings.size(), 2U);
}

}  // namespace
}  // namespace foilex::pddl
