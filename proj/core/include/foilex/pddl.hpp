#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foilex/model.hpp"

namespace foilex::pddl {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct TypedName {
  std::string name;
  std::string type = "object";

  bool operator==(const TypedName&) const = default;
};

/// Lifted atom: terms are either variables ("?x") or constant names.
struct Atom {
  std::string predicate;
  std::vector<std::string> terms;
  SourcePos pos;

  bool operator==(const Atom& o) const { return predicate == o.predicate && terms == o.terms; }
};

/// One effect clause of a schema. The unconditional literals of an action form a
/// clause with an empty condition; every (when ...) contributes its own clause.
struct EffectAst {
  std::vector<Atom> condition;
  std::vector<Atom> add;
  std::vector<Atom> del;
  bool conditional = false;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::vector<Atom> precondition;
  std::vector<EffectAst> effects;
  SourcePos pos;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> parameters;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  /// type -> parent type; "object" is the implicit root.
  std::map<std::string, std::string> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;
  std::vector<std::string> warnings;
};

struct ProblemAst {
  std::string name;
  std::string domain;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  std::vector<std::string> warnings;
};

/// Parses a domain restricted to :strips, :typing, :conditional-effects and
/// :action-costs. Cost effects are dropped with a warning. Throws ParseError or
/// UnsupportedFeatureError.
DomainAst parse_domain(std::string_view text);
ProblemAst parse_problem(std::string_view text);

struct GroundingOptions {
  std::size_t max_actions = 500'000;
  /// Evaluate never-modified predicates against the initial state and remove them.
  bool compile_statics = true;
};

/// Instantiates every type-consistent schema binding. Throws GroundingError or
/// ResourceLimitError when the action cap is exceeded.
PlanningModel ground(const DomainAst& domain, const ProblemAst& problem,
                     const GroundingOptions& options = {});

/// Ground ("every action has zero parameters") PDDL rendering of a concrete
/// model. Re-parsing with compile_statics = false reproduces an equal model.
std::string write_domain(const PlanningModel& model, std::string_view name = "ground");
std::string write_problem(const PlanningModel& model, std::string_view name = "ground-problem",
                          std::string_view domain_name = "ground");

}  // namespace foilex::pddl
