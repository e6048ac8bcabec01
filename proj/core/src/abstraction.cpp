#include "foilex/abstraction.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "foilex/errors.hpp"

namespace foilex {

std::vector<std::size_t> UnitSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

bool lex_less(UnitSet a, UnitSet b) {
  std::uint64_t x = a.bits();
  std::uint64_t y = b.bits();
  while (x != 0 && y != 0) {
    int i = std::countr_zero(x);
    int j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

FluentMask removal_mask(const FluentTable& table, const std::vector<AbstractionUnit>& units,
                        UnitSet dropped) {
  if (units.size() < kMaxUnits && !dropped.is_subset_of(UnitSet::all(units.size()))) {
    throw InputError("abstraction spec names an unknown unit");
  }
  FluentMask mask(table.size());
  for (std::size_t i : dropped.indices()) {
    for (FluentId f : units[i].fluents) mask.set(f);
  }
  return mask;
}

GroundAction project_action(const GroundAction& action, const FluentMask& removed) {
  GroundAction out;
  out.name = action.name;
  out.schema = action.schema;
  out.args = action.args;
  out.prec = subtract(action.prec, removed);
  const bool weakened_prec = out.prec.size() != action.prec.size();
  out.effects.reserve(action.effects.size());
  for (const auto& clause : action.effects) {
    EffectClause c;
    c.add = subtract(clause.add, removed);
    c.del = subtract(clause.del, removed);
    if (c.add.empty() && c.del.empty()) continue;
    c.condition = subtract(clause.condition, removed);
    c.nd = clause.nd || weakened_prec || c.condition.size() != clause.condition.size();
    out.effects.push_back(std::move(c));
  }
  return out;
}

PlanningModel project_model(const PlanningModel& base, const FluentMask& removed) {
  std::vector<GroundAction> actions;
  actions.reserve(base.actions().size());
  for (const auto& a : base.actions()) actions.push_back(project_action(a, removed));
  return PlanningModel(base.table_ptr(), subtract(base.fluents(), removed), std::move(actions),
                       subtract(base.init(), removed), subtract(base.goal(), removed));
}

bool validate_projected(const PlanningModel& base, const FluentMask& removed,
                        const ResolvedPlan& plan, const ExecutionOptions& options) {
  State init = base.mask_of(base.init());
  init -= removed;
  std::vector<State> belief{std::move(init)};
  for (std::size_t index : plan) {
    expand_belief(belief, project_action(base.actions().at(index), removed), options);
  }
  return any_satisfies(belief, subtract(base.goal(), removed));
}

AbstractModel project(std::shared_ptr<const PlanningModel> base,
                      const std::vector<AbstractionUnit>& units, UnitSet dropped) {
  if (!base) throw InputError("projection requires a base model");
  FluentMask mask = removal_mask(base->table(), units, dropped);
  auto model = std::make_shared<const PlanningModel>(project_model(*base, mask));
  return {std::move(model), dropped, std::move(base)};
}

AbstractModel concretize(const AbstractModel& current, const std::vector<AbstractionUnit>& units,
                         std::size_t p) {
  if (p >= units.size() || !current.spec.contains(p)) {
    throw InputError("cannot concretize unit '" + (p < units.size() ? units[p].id : std::to_string(p)) +
                     "': it is not abstracted in this model");
  }
  return project(current.base, units, current.spec.without(p));
}

const char* to_string(UpdateKind kind) {
  switch (kind) {
    case UpdateKind::kPrecondition:
      return "has-precondition";
    case UpdateKind::kEffectCondition:
      return "has-effect-condition";
    case UpdateKind::kAddEffect:
      return "has-add-effect";
    case UpdateKind::kDeleteEffect:
      return "has-delete-effect";
    case UpdateKind::kInitialState:
      return "in-initial-state";
    case UpdateKind::kGoal:
      return "in-goal";
  }
  return "unknown";
}

std::vector<ModelUpdate> unit_updates(const PlanningModel& base, const AbstractionUnit& unit) {
  const FluentTable& table = base.table();
  FluentMask in_unit(table.size());
  for (FluentId f : unit.fluents) in_unit.set(f);
  const bool lifted = unit.granularity == Granularity::kPredicate;

  using Key = std::tuple<std::string, UpdateKind, std::string>;
  std::set<Key> scoped;
  std::set<std::string> init;
  std::set<std::string> goal;

  auto collect = [&](const GroundAction& a, const FluentList& list, UpdateKind kind) {
    for (FluentId f : list) {
      if (!in_unit.test(f)) continue;
      scoped.emplace(lifted ? a.schema : a.name, kind,
                     lifted ? table[f].predicate : table[f].name());
    }
  };
  for (const auto& a : base.actions()) {
    collect(a, a.prec, UpdateKind::kPrecondition);
    for (const auto& clause : a.effects) {
      collect(a, clause.condition, UpdateKind::kEffectCondition);
      collect(a, clause.add, UpdateKind::kAddEffect);
      collect(a, clause.del, UpdateKind::kDeleteEffect);
    }
  }
  for (FluentId f : base.init()) {
    if (in_unit.test(f)) init.insert(table[f].name());
  }
  for (FluentId f : base.goal()) {
    if (in_unit.test(f)) goal.insert(table[f].name());
  }

  std::vector<ModelUpdate> out;
  out.reserve(scoped.size() + init.size() + goal.size());
  for (const auto& [action, kind, fluent] : scoped) out.push_back({kind, action, fluent});
  for (const auto& fluent : init) out.push_back({UpdateKind::kInitialState, {}, fluent});
  for (const auto& fluent : goal) out.push_back({UpdateKind::kGoal, {}, fluent});
  return out;
}

std::size_t unit_cost(const PlanningModel& base, const AbstractionUnit& unit) {
  return unit_updates(base, unit).size();
}

}  // namespace foilex
