#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "foilex/execution.hpp"
#include "foilex/model.hpp"

namespace foilex {

enum class Granularity { kPredicate, kFluent };

/// A group of ground fluents that is projected out and restored as one.
struct AbstractionUnit {
  std::string id;
  Granularity granularity = Granularity::kPredicate;
  /// Predicate names (predicate granularity) or fluent names (fluent granularity).
  std::vector<std::string> members;
  FluentList fluents;
};

inline constexpr std::size_t kMaxUnits = 64;

/// Set of unit indices. Bit i refers to the i-th unit of a lattice, whose units
/// are kept sorted by id, so increasing bit order is lexicographic id order.
class UnitSet {
 public:
  constexpr UnitSet() = default;
  constexpr explicit UnitSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr UnitSet single(std::size_t i) { return UnitSet(std::uint64_t{1} << i); }
  static constexpr UnitSet all(std::size_t n) {
    return UnitSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i & 1U) != 0; }
  constexpr bool is_subset_of(UnitSet o) const { return (bits_ & ~o.bits_) == 0; }

  constexpr UnitSet with(std::size_t i) const { return UnitSet(bits_ | std::uint64_t{1} << i); }
  constexpr UnitSet without(std::size_t i) const { return UnitSet(bits_ & ~(std::uint64_t{1} << i)); }

  constexpr UnitSet operator|(UnitSet o) const { return UnitSet(bits_ | o.bits_); }
  constexpr UnitSet operator&(UnitSet o) const { return UnitSet(bits_ & o.bits_); }
  constexpr UnitSet operator-(UnitSet o) const { return UnitSet(bits_ & ~o.bits_); }

  std::vector<std::size_t> indices() const;

  constexpr bool operator==(const UnitSet&) const = default;
  constexpr auto operator<=>(const UnitSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on the sorted index lists: {0} < {0,1} < {1}.
bool lex_less(UnitSet a, UnitSet b);

/// Union of the fluents of the units in `dropped`. Throws InputError when the
/// set names a unit index outside `units`.
FluentMask removal_mask(const FluentTable& table, const std::vector<AbstractionUnit>& units,
                        UnitSet dropped);

/// Removes `removed` from the action. A surviving clause turns
/// non-deterministic when a removed fluent occurred in its condition or in the
/// precondition; clauses left without add and delete effects disappear.
GroundAction project_action(const GroundAction& action, const FluentMask& removed);

/// f_Lambda applied to a whole model. Shares the base's fluent table.
PlanningModel project_model(const PlanningModel& base, const FluentMask& removed);

/// Same answer as validate_resolved_nd(project_model(base, removed), plan),
/// without materializing the projected model.
bool validate_projected(const PlanningModel& base, const FluentMask& removed,
                        const ResolvedPlan& plan, const ExecutionOptions& options = {});

struct AbstractModel {
  std::shared_ptr<const PlanningModel> model;
  UnitSet spec;
  std::shared_ptr<const PlanningModel> base;
};

AbstractModel project(std::shared_ptr<const PlanningModel> base,
                      const std::vector<AbstractionUnit>& units, UnitSet dropped);

/// Restores unit `p`: re-projects the base with p removed from the spec.
/// Throws InputError when p is not dropped in `current`.
AbstractModel concretize(const AbstractModel& current, const std::vector<AbstractionUnit>& units,
                         std::size_t p);

enum class UpdateKind {
  kPrecondition,
  kEffectCondition,
  kAddEffect,
  kDeleteEffect,
  kInitialState,
  kGoal,
};

const char* to_string(UpdateKind kind);

/// One fact a concretization tells the listener. Action-scoped updates name
/// the schema and predicate for predicate-level units and the ground action and
/// fluent for fluent-level units; init and goal updates name ground fluents.
struct ModelUpdate {
  UpdateKind kind;
  std::string action;
  std::string fluent;

  bool operator==(const ModelUpdate&) const = default;
};

/// Distinct updates mentioning the unit, ordered action-scoped first (by
/// action, kind, fluent), then initial-state facts, then goal facts.
std::vector<ModelUpdate> unit_updates(const PlanningModel& base, const AbstractionUnit& unit);

std::size_t unit_cost(const PlanningModel& base, const AbstractionUnit& unit);

}  // namespace foilex
