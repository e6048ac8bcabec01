#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace foilex {

/// A ground atom, e.g. (full store1). Always stored in lowercase.
struct Fluent {
  std::string predicate;
  std::vector<std::string> args;

  /// Underscore-joined form used in messages: "full_store1".
  std::string name() const;
  /// S-expression form: "(full store1)".
  std::string to_pddl() const;

  auto operator<=>(const Fluent&) const = default;
  bool operator==(const Fluent&) const = default;
};

using FluentId = std::uint32_t;

/// Sorted, duplicate-free list of fluent ids.
using FluentList = std::vector<FluentId>;

/// Bit per fluent of a FluentTable. Used for states and removal masks.
using FluentMask = boost::dynamic_bitset<std::uint64_t>;

/// Interning table for the ground fluents of a model family. Ids follow the
/// lexicographic order of the fluents, so two tables built from the same set
/// assign identical ids.
class FluentTable {
 public:
  explicit FluentTable(std::vector<Fluent> fluents);

  std::size_t size() const { return fluents_.size(); }
  const Fluent& operator[](FluentId id) const { return fluents_[id]; }
  const std::vector<Fluent>& fluents() const { return fluents_; }

  std::optional<FluentId> find(const Fluent& fluent) const;
  /// Lookup by underscore-joined name ("full_store1"). Linear; for config parsing.
  std::optional<FluentId> find_by_name(std::string_view name) const;

  FluentMask empty_mask() const { return FluentMask(fluents_.size()); }

 private:
  std::vector<Fluent> fluents_;
};

/// One conditional effect: when `condition` holds, apply `add` and `del`.
/// `nd` marks a clause that may or may not fire (only in abstract models).
struct EffectClause {
  FluentList condition;
  FluentList add;
  FluentList del;
  bool nd = false;

  bool operator==(const EffectClause&) const = default;
};

struct GroundAction {
  std::string name;
  /// Lifted schema the action was instantiated from; equals `name` for
  /// actions read from ground PDDL.
  std::string schema;
  std::vector<std::string> args;
  FluentList prec;
  std::vector<EffectClause> effects;

  bool deterministic() const;
};

/// Ground propositional model <P, A, I, G>. Immutable once built; abstract
/// models share the fluent table of the model they were projected from.
class PlanningModel {
 public:
  PlanningModel(std::shared_ptr<const FluentTable> table, FluentList fluents,
                std::vector<GroundAction> actions, FluentList init, FluentList goal);

  const FluentTable& table() const { return *table_; }
  const std::shared_ptr<const FluentTable>& table_ptr() const { return table_; }

  const FluentList& fluents() const { return fluents_; }
  const std::vector<GroundAction>& actions() const { return actions_; }
  const FluentList& init() const { return init_; }
  const FluentList& goal() const { return goal_; }

  const GroundAction* find_action(std::string_view name) const;
  /// Throws UnknownActionError.
  const GroundAction& action(std::string_view name) const;

  /// Distinct predicate names over the model's fluents, sorted.
  std::vector<std::string> predicates() const;

  bool deterministic() const;
  bool has_fluent(FluentId id) const { return member_.test(id); }

  /// Mask of the fluents in `list`, sized to the table.
  FluentMask mask_of(const FluentList& list) const;
  std::string describe(FluentId id) const { return (*table_)[id].name(); }

 private:
  std::shared_ptr<const FluentTable> table_;
  FluentList fluents_;
  std::vector<GroundAction> actions_;
  FluentList init_;
  FluentList goal_;
  FluentMask member_;
};

/// Structural equality over (fluents, actions, init, goal), compared by fluent
/// value so models with different tables can be compared.
bool operator==(const PlanningModel& lhs, const PlanningModel& rhs);

/// Sorts and removes duplicates in place.
void normalize(FluentList& list);
bool is_subset(const FluentList& sub, const FluentList& super);
bool intersects(const FluentList& list, const FluentMask& mask);
/// list minus every fluent set in `mask`.
FluentList subtract(const FluentList& list, const FluentMask& mask);

}  // namespace foilex
