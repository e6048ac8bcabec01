#include "foilex/model.hpp"

#include <algorithm>
#include <set>

#include "foilex/errors.hpp"

namespace foilex {

std::string Fluent::name() const {
  std::string out = predicate;
  for (const auto& arg : args) {
    out += '_';
    out += arg;
  }
  return out;
}

std::string Fluent::to_pddl() const {
  std::string out = "(" + predicate;
  for (const auto& arg : args) {
    out += ' ';
    out += arg;
  }
  out += ')';
  return out;
}

FluentTable::FluentTable(std::vector<Fluent> fluents) : fluents_(std::move(fluents)) {
  std::sort(fluents_.begin(), fluents_.end());
  fluents_.erase(std::unique(fluents_.begin(), fluents_.end()), fluents_.end());
}

std::optional<FluentId> FluentTable::find(const Fluent& fluent) const {
  auto it = std::lower_bound(fluents_.begin(), fluents_.end(), fluent);
  if (it == fluents_.end() || *it != fluent) return std::nullopt;
  return static_cast<FluentId>(it - fluents_.begin());
}

std::optional<FluentId> FluentTable::find_by_name(std::string_view name) const {
  for (std::size_t i = 0; i < fluents_.size(); ++i) {
    if (fluents_[i].name() == name) return static_cast<FluentId>(i);
  }
  return std::nullopt;
}

bool GroundAction::deterministic() const {
  return std::none_of(effects.begin(), effects.end(), [](const EffectClause& c) { return c.nd; });
}

void normalize(FluentList& list) {
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());
}

bool is_subset(const FluentList& sub, const FluentList& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool intersects(const FluentList& list, const FluentMask& mask) {
  return std::any_of(list.begin(), list.end(), [&](FluentId f) { return mask.test(f); });
}

FluentList subtract(const FluentList& list, const FluentMask& mask) {
  FluentList out;
  out.reserve(list.size());
  for (FluentId f : list) {
    if (!mask.test(f)) out.push_back(f);
  }
  return out;
}

PlanningModel::PlanningModel(std::shared_ptr<const FluentTable> table, FluentList fluents,
                             std::vector<GroundAction> actions, FluentList init,
                             FluentList goal)
    : table_(std::move(table)),
      fluents_(std::move(fluents)),
      actions_(std::move(actions)),
      init_(std::move(init)),
      goal_(std::move(goal)) {
  if (!table_) throw InputError("planning model requires a fluent table");
  normalize(fluents_);
  normalize(init_);
  normalize(goal_);
  member_ = FluentMask(table_->size());
  for (FluentId f : fluents_) {
    if (f >= table_->size()) throw InputError("fluent id out of range");
    member_.set(f);
  }

  auto check = [&](const FluentList& list, const std::string& where) {
    for (FluentId f : list) {
      if (f >= table_->size() || !member_.test(f)) {
        throw InputError(where + " references fluent outside the model: " +
                         (f < table_->size() ? (*table_)[f].name() : std::to_string(f)));
      }
    }
  };
  check(init_, "initial state");
  check(goal_, "goal");

  for (auto& action : actions_) {
    if (action.schema.empty()) action.schema = action.name;
    normalize(action.prec);
    check(action.prec, "action " + action.name);
    for (auto& clause : action.effects) {
      normalize(clause.condition);
      normalize(clause.add);
      normalize(clause.del);
      check(clause.condition, "action " + action.name);
      check(clause.add, "action " + action.name);
      check(clause.del, "action " + action.name);
      FluentList overlap;
      std::set_intersection(clause.add.begin(), clause.add.end(), clause.del.begin(),
                            clause.del.end(), std::back_inserter(overlap));
      if (!overlap.empty()) {
        throw InputError("action " + action.name + " adds and deletes " +
                         (*table_)[overlap.front()].name() + " in one clause");
      }
    }
  }
  std::sort(actions_.begin(), actions_.end(),
            [](const GroundAction& a, const GroundAction& b) { return a.name < b.name; });
  for (std::size_t i = 1; i < actions_.size(); ++i) {
    if (actions_[i - 1].name == actions_[i].name) {
      throw InputError("duplicate ground action name '" + actions_[i].name + "'");
    }
  }
}

const GroundAction* PlanningModel::find_action(std::string_view name) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), name,
                             [](const GroundAction& a, std::string_view n) { return a.name < n; });
  if (it == actions_.end() || it->name != name) return nullptr;
  return &*it;
}

const GroundAction& PlanningModel::action(std::string_view name) const {
  if (const auto* a = find_action(name)) return *a;
  throw UnknownActionError(std::string(name));
}

std::vector<std::string> PlanningModel::predicates() const {
  std::set<std::string> names;
  for (FluentId f : fluents_) names.insert((*table_)[f].predicate);
  return {names.begin(), names.end()};
}

bool PlanningModel::deterministic() const {
  return std::all_of(actions_.begin(), actions_.end(),
                     [](const GroundAction& a) { return a.deterministic(); });
}

FluentMask PlanningModel::mask_of(const FluentList& list) const {
  FluentMask mask(table_->size());
  for (FluentId f : list) mask.set(f);
  return mask;
}

namespace {

std::vector<Fluent> resolve(const FluentTable& table, const FluentList& list) {
  std::vector<Fluent> out;
  out.reserve(list.size());
  for (FluentId f : list) out.push_back(table[f]);
  return out;
}

}  // namespace

bool operator==(const PlanningModel& lhs, const PlanningModel& rhs) {
  const auto& lt = lhs.table();
  const auto& rt = rhs.table();
  auto same = [&](const FluentList& a, const FluentList& b) {
    return resolve(lt, a) == resolve(rt, b);
  };
  if (!same(lhs.fluents(), rhs.fluents()) || !same(lhs.init(), rhs.init()) ||
      !same(lhs.goal(), rhs.goal())) {
    return false;
  }
  if (lhs.actions().size() != rhs.actions().size()) return false;
  for (std::size_t i = 0; i < lhs.actions().size(); ++i) {
    const auto& a = lhs.actions()[i];
    const auto& b = rhs.actions()[i];
    if (a.name != b.name || !same(a.prec, b.prec) || a.effects.size() != b.effects.size()) {
      return false;
    }
    for (std::size_t c = 0; c < a.effects.size(); ++c) {
      const auto& x = a.effects[c];
      const auto& y = b.effects[c];
      if (x.nd != y.nd || !same(x.condition, y.condition) || !same(x.add, y.add) ||
          !same(x.del, y.del)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace foilex
