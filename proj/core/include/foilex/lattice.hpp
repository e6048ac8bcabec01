#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "foilex/abstraction.hpp"
#include "foilex/execution.hpp"
#include "foilex/model.hpp"

namespace foilex {

struct LatticeConfig {
  Granularity granularity = Granularity::kPredicate;
  /// unit id -> predicate names or fluent names, depending on granularity.
  std::map<std::string, std::vector<std::string>> units;
};

/// Implicit complete lattice over a base model: every subset of the units is a
/// node, reached by projecting those units out of the base.
class LatticeSpec {
 public:
  /// Units are sorted by id and must be nonempty, pairwise disjoint and drawn
  /// from the base's fluents. Throws InputError.
  LatticeSpec(std::shared_ptr<const PlanningModel> base, std::vector<AbstractionUnit> units,
              bool complete = true);

  const PlanningModel& base() const { return *base_; }
  const std::shared_ptr<const PlanningModel>& base_ptr() const { return base_; }
  const std::vector<AbstractionUnit>& units() const { return units_; }
  const AbstractionUnit& unit(std::size_t i) const { return units_.at(i); }
  std::size_t size() const { return units_.size(); }
  bool complete() const { return complete_; }
  UnitSet all() const { return UnitSet::all(units_.size()); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws InputError on unknown ids.
  UnitSet spec_of(const std::vector<std::string>& ids) const;
  std::vector<std::string> ids(UnitSet set) const;

  FluentMask removal_mask(UnitSet dropped) const;
  AbstractModel project(UnitSet dropped) const;

  std::size_t unit_cost(std::size_t i) const { return costs_.at(i); }
  const std::vector<std::size_t>& unit_costs() const { return costs_; }
  std::size_t cost(UnitSet set) const;
  /// C_P: cost of concretizing every unit.
  std::size_t total_cost() const { return cost(all()); }

 private:
  std::shared_ptr<const PlanningModel> base_;
  std::vector<AbstractionUnit> units_;
  std::vector<std::size_t> costs_;
  bool complete_;
};

LatticeSpec build_lattice(std::shared_ptr<const PlanningModel> base, const LatticeConfig& config);

/// Predicates that can be abstracted: those with at least one fluent in the model.
std::vector<std::string> abstractable_predicates(const PlanningModel& model);

/// Picks ceil(fraction * #predicates) predicates with a seeded mt19937_64 and
/// makes one unit per predicate. Throws InputError for fraction outside (0, 1]
/// or a model without predicates.
LatticeSpec generate_lattice_config(std::shared_ptr<const PlanningModel> base, double fraction,
                                    std::uint64_t seed);

/// Memoized foil validity per (abstraction spec, foil) on one lattice.
class FoilValidator {
 public:
  FoilValidator(const LatticeSpec& lattice, const FoilSet& foils, ExecutionOptions options = {});

  const LatticeSpec& lattice() const { return lattice_; }
  std::size_t foil_count() const { return plans_.size(); }
  const FoilSet& foils() const { return foils_; }

  bool valid(UnitSet dropped, std::size_t foil);
  bool consistent(UnitSet dropped);
  /// Number of validity evaluations that missed the cache.
  std::size_t evaluations() const { return evaluations_; }

 private:
  struct Entry {
    std::uint64_t known = 0;
    std::uint64_t valid = 0;
  };

  const LatticeSpec& lattice_;
  FoilSet foils_;
  std::vector<ResolvedPlan> plans_;
  ExecutionOptions options_;
  std::unordered_map<std::uint64_t, Entry> memo_;
  std::size_t evaluations_ = 0;
};

struct LatticeSearchOptions {
  /// Bound on subsets tested by the level-order search.
  std::size_t max_checks = std::size_t{1} << 22;
  /// Bound on |P| for exhaustive enumeration.
  std::size_t enumeration_cap = 16;
};

/// Inclusion-minimal specs X, disjoint from `concretized`, such that every foil
/// is valid after projecting X | concretized. With nothing concretized this is
/// the minimal abstraction set. Sorted by (size, lexicographic ids). Throws
/// InconsistentFoilsError when no spec qualifies.
std::vector<UnitSet> min_abstraction_set(FoilValidator& validator, UnitSet concretized = {},
                                         const LatticeSearchOptions& options = {});
std::vector<UnitSet> min_abstraction_set(const LatticeSpec& lattice, const FoilSet& foils,
                                         UnitSet concretized = {},
                                         const LatticeSearchOptions& options = {});

/// Every spec in which all foils are valid. Throws ResourceLimitError when the
/// lattice exceeds the enumeration cap.
std::vector<UnitSet> consistent_models(FoilValidator& validator,
                                       const LatticeSearchOptions& options = {});
std::vector<UnitSet> consistent_models(const LatticeSpec& lattice, const FoilSet& foils,
                                       const LatticeSearchOptions& options = {});

/// Minimal elements of {spec - explained : spec in mmin}: the minimal
/// abstraction set after the units in `explained` have been concretized.
std::vector<UnitSet> carry_forward(const std::vector<UnitSet>& mmin, UnitSet explained);

/// Inclusion-minimal members, sorted by (size, lexicographic ids), no duplicates.
std::vector<UnitSet> minimal_elements(std::vector<UnitSet> sets);

}  // namespace foilex
