#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "foilex/execution.hpp"
#include "foilex/model.hpp"

namespace foilex::fixtures {

struct PlannerOptions {
  std::size_t max_expansions = 2'000'000;
  /// Nonzero seeds shuffle successor order for diverse plans.
  std::uint64_t seed = 0;
  /// Weight on g; 0 is pure greedy best-first.
  double g_weight = 0.0;
};

/// Greedy best-first search with the additive heuristic. Non-deterministic
/// clauses are treated as always firing, so a plan found in an abstract model
/// is valid under optimistic semantics. Returns action indices.
std::optional<ResolvedPlan> find_plan(const PlanningModel& model, const PlannerOptions& options = {});

}  // namespace foilex::fixtures
