#include "foilex/execution.hpp"

#include <algorithm>

#include "foilex/errors.hpp"

namespace foilex {
namespace {

bool holds(const FluentList& list, const State& s) {
  return std::all_of(list.begin(), list.end(), [&](FluentId f) { return s.test(f); });
}

// Fluent sets are tiny relative to the table, so the successor is built by
// copying the state and flipping bits rather than with mask arithmetic.
State successor(const State& s, const std::vector<const EffectClause*>& fired) {
  State next = s;
  for (const auto* c : fired) {
    for (FluentId f : c->add) next.set(f);
  }
  for (const auto* c : fired) {
    for (FluentId f : c->del) next.reset(f);
  }
  return next;
}

constexpr std::size_t kMaxNdClausesPerStep = 20;

}  // namespace

ResolvedPlan resolve_plan(const PlanningModel& model, const Foil& foil) {
  ResolvedPlan out;
  out.reserve(foil.actions.size());
  const auto& actions = model.actions();
  for (const auto& name : foil.actions) {
    const GroundAction& a = model.action(name);
    out.push_back(static_cast<std::size_t>(&a - actions.data()));
  }
  return out;
}

State initial_state(const PlanningModel& model) { return model.mask_of(model.init()); }

State apply_action(const State& s, const GroundAction& a) {
  if (!a.deterministic()) {
    throw InputError("action " + a.name + " has non-deterministic effects");
  }
  if (!holds(a.prec, s)) return s;
  std::vector<const EffectClause*> fired;
  for (const auto& clause : a.effects) {
    if (holds(clause.condition, s)) fired.push_back(&clause);
  }
  return successor(s, fired);
}

bool validate_plan(const PlanningModel& model, const Foil& plan) {
  if (!model.deterministic()) {
    throw InputError("validate_plan requires a deterministic model");
  }
  State s = initial_state(model);
  for (const auto& name : plan.actions) s = apply_action(s, model.action(name));
  return holds(model.goal(), s);
}

void expand_belief(std::vector<State>& belief, const GroundAction& a,
                   const ExecutionOptions& options) {
  std::vector<State> next;
  next.reserve(belief.size());
  std::vector<const EffectClause*> fired;
  std::vector<const EffectClause*> optional;
  for (const State& s : belief) {
    if (!holds(a.prec, s)) {
      next.push_back(s);
      continue;
    }
    fired.clear();
    optional.clear();
    for (const auto& clause : a.effects) {
      if (!holds(clause.condition, s)) continue;
      (clause.nd ? optional : fired).push_back(&clause);
    }
    if (optional.size() > kMaxNdClausesPerStep) {
      throw ResourceLimitError("action " + a.name + " enables " + std::to_string(optional.size()) +
                               " non-deterministic clauses in one step");
    }
    const std::size_t base = fired.size();
    const std::size_t outcomes = std::size_t{1} << optional.size();
    for (std::size_t choice = 0; choice < outcomes; ++choice) {
      fired.resize(base);
      for (std::size_t i = 0; i < optional.size(); ++i) {
        if (choice >> i & 1U) fired.push_back(optional[i]);
      }
      next.push_back(successor(s, fired));
    }
    if (next.size() > 4 * options.max_belief_states) {
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.size() > options.max_belief_states) break;
    }
  }
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  if (next.size() > options.max_belief_states) {
    throw ResourceLimitError("belief state exceeds " + std::to_string(options.max_belief_states) +
                             " states at action " + a.name);
  }
  belief = std::move(next);
}

bool any_satisfies(const std::vector<State>& belief, const FluentList& goal) {
  return std::any_of(belief.begin(), belief.end(), [&](const State& s) { return holds(goal, s); });
}

bool validate_resolved_nd(const PlanningModel& model, const ResolvedPlan& plan,
                          const ExecutionOptions& options) {
  std::vector<State> belief{initial_state(model)};
  for (std::size_t index : plan) expand_belief(belief, model.actions().at(index), options);
  return any_satisfies(belief, model.goal());
}

bool validate_plan_nd(const PlanningModel& model, const Foil& plan,
                      const ExecutionOptions& options) {
  return validate_resolved_nd(model, resolve_plan(model, plan), options);
}

}  // namespace foilex
