#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "foilex/model.hpp"

namespace foilex {

/// A plan or foil: ground action names in execution order.
struct Foil {
  std::string name;
  std::vector<std::string> actions;

  bool operator==(const Foil&) const = default;
};

using FoilSet = std::vector<Foil>;

/// A state is the set of fluents that are true, as a mask over the table.
using State = FluentMask;

/// Foil with names resolved to indices into PlanningModel::actions(). Projection
/// keeps the action list intact, so the indices are valid for every abstraction
/// of the model they were resolved against.
using ResolvedPlan = std::vector<std::size_t>;

struct ExecutionOptions {
  /// Upper bound on distinct belief states after any step.
  std::size_t max_belief_states = 100'000;
};

/// Throws UnknownActionError.
ResolvedPlan resolve_plan(const PlanningModel& model, const Foil& foil);

State initial_state(const PlanningModel& model);

/// Deterministic successor; a no-op when the precondition does not hold.
/// Throws InputError for actions with non-deterministic clauses.
State apply_action(const State& s, const GroundAction& a);

/// Deterministic plan validity: pi(I) contains G. Throws InputError when the
/// model has non-deterministic clauses.
bool validate_plan(const PlanningModel& model, const Foil& plan);

/// Optimistic validity: some resolution of the non-deterministic clauses
/// reaches the goal. Throws ResourceLimitError when the belief grows too large.
bool validate_plan_nd(const PlanningModel& model, const Foil& plan,
                      const ExecutionOptions& options = {});
bool validate_resolved_nd(const PlanningModel& model, const ResolvedPlan& plan,
                          const ExecutionOptions& options = {});

/// Replaces every state in `belief` by its successors under `a`, deduplicated.
/// Non-deterministic clauses that are enabled fire or not, each as one unit.
void expand_belief(std::vector<State>& belief, const GroundAction& a,
                   const ExecutionOptions& options = {});

bool any_satisfies(const std::vector<State>& belief, const FluentList& goal);

}  // namespace foilex
