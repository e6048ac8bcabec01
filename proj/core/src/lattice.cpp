#include "foilex/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "foilex/errors.hpp"

namespace foilex {
namespace {

void sort_specs(std::vector<UnitSet>& specs) {
  std::sort(specs.begin(), specs.end(), [](UnitSet a, UnitSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
  });
  specs.erase(std::unique(specs.begin(), specs.end()), specs.end());
}

// Scatters the low bits of `compact` onto the positions listed in `slots`.
UnitSet expand(std::uint64_t compact, const std::vector<std::size_t>& slots) {
  UnitSet out;
  for (std::size_t i = 0; compact != 0; ++i, compact >>= 1) {
    if (compact & 1U) out = out.with(slots[i]);
  }
  return out;
}

}  // namespace

LatticeSpec::LatticeSpec(std::shared_ptr<const PlanningModel> base,
                         std::vector<AbstractionUnit> units, bool complete)
    : base_(std::move(base)), units_(std::move(units)), complete_(complete) {
  if (!base_) throw InputError("lattice requires a base model");
  if (units_.size() > kMaxUnits) {
    throw InputError("at most " + std::to_string(kMaxUnits) + " abstraction units are supported");
  }
  std::sort(units_.begin(), units_.end(),
            [](const AbstractionUnit& a, const AbstractionUnit& b) { return a.id < b.id; });
  FluentMask seen = base_->table().empty_mask();
  for (std::size_t i = 0; i < units_.size(); ++i) {
    auto& unit = units_[i];
    if (unit.id.empty()) throw InputError("abstraction unit with empty id");
    if (i > 0 && units_[i - 1].id == unit.id) throw InputError("duplicate unit id '" + unit.id + "'");
    normalize(unit.fluents);
    if (unit.fluents.empty()) throw InputError("unit '" + unit.id + "' has no fluents");
    for (FluentId f : unit.fluents) {
      if (f >= seen.size() || !base_->has_fluent(f)) {
        throw InputError("unit '" + unit.id + "' references a fluent outside the base model");
      }
      if (seen.test(f)) {
        throw InputError("fluent " + base_->describe(f) + " belongs to two units");
      }
      seen.set(f);
    }
  }
  costs_.reserve(units_.size());
  for (const auto& unit : units_) costs_.push_back(foilex::unit_cost(*base_, unit));
}

std::optional<std::size_t> LatticeSpec::find(std::string_view id) const {
  auto it = std::lower_bound(units_.begin(), units_.end(), id,
                             [](const AbstractionUnit& u, std::string_view v) { return u.id < v; });
  if (it == units_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - units_.begin());
}

UnitSet LatticeSpec::spec_of(const std::vector<std::string>& ids) const {
  UnitSet out;
  for (const auto& id : ids) {
    auto i = find(id);
    if (!i) throw InputError("unknown abstraction unit '" + id + "'");
    out = out.with(*i);
  }
  return out;
}

std::vector<std::string> LatticeSpec::ids(UnitSet set) const {
  std::vector<std::string> out;
  for (std::size_t i : set.indices()) out.push_back(units_.at(i).id);
  return out;
}

FluentMask LatticeSpec::removal_mask(UnitSet dropped) const {
  return foilex::removal_mask(base_->table(), units_, dropped);
}

AbstractModel LatticeSpec::project(UnitSet dropped) const {
  return foilex::project(base_, units_, dropped);
}

std::size_t LatticeSpec::cost(UnitSet set) const {
  std::size_t total = 0;
  for (std::size_t i : set.indices()) total += costs_.at(i);
  return total;
}

std::vector<std::string> abstractable_predicates(const PlanningModel& model) {
  return model.predicates();
}

LatticeSpec build_lattice(std::shared_ptr<const PlanningModel> base, const LatticeConfig& config) {
  if (!base) throw InputError("lattice requires a base model");
  const FluentTable& table = base->table();
  std::vector<AbstractionUnit> units;
  for (const auto& [id, members] : config.units) {
    AbstractionUnit unit{id, config.granularity, members, {}};
    if (members.empty()) throw InputError("unit '" + id + "' lists no members");
    for (const auto& member : members) {
      std::size_t before = unit.fluents.size();
      if (config.granularity == Granularity::kPredicate) {
        for (FluentId f : base->fluents()) {
          if (table[f].predicate == member) unit.fluents.push_back(f);
        }
      } else {
        auto f = table.find_by_name(member);
        if (f && base->has_fluent(*f)) unit.fluents.push_back(*f);
      }
      if (unit.fluents.size() == before) {
        throw InputError("unit '" + id + "': '" + member +
                         "' matches no fluent of the model (unknown or static)");
      }
    }
    units.push_back(std::move(unit));
  }
  return LatticeSpec(std::move(base), std::move(units));
}

LatticeSpec generate_lattice_config(std::shared_ptr<const PlanningModel> base, double fraction,
                                    std::uint64_t seed) {
  if (!base) throw InputError("lattice requires a base model");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InputError("lattice fraction must lie in (0, 1]");
  }
  std::vector<std::string> predicates = abstractable_predicates(*base);
  if (predicates.empty()) throw InputError("model has no abstractable predicates");
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(predicates.size()) - 1e-9));
  count = std::clamp<std::size_t>(count, 1, std::min(predicates.size(), kMaxUnits));

  // Raw engine output keeps the selection identical across standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = predicates.size() - 1; i > 0; --i) {
    std::swap(predicates[i], predicates[static_cast<std::size_t>(rng() % (i + 1))]);
  }
  predicates.resize(count);

  LatticeConfig config;
  for (const auto& p : predicates) config.units[p] = {p};
  return build_lattice(std::move(base), config);
}

FoilValidator::FoilValidator(const LatticeSpec& lattice, const FoilSet& foils,
                             ExecutionOptions options)
    : lattice_(lattice), foils_(foils), options_(options) {
  if (foils.size() > 64) throw InputError("at most 64 foils are supported");
  plans_.reserve(foils.size());
  for (const auto& foil : foils) plans_.push_back(resolve_plan(lattice.base(), foil));
}

bool FoilValidator::valid(UnitSet dropped, std::size_t foil) {
  Entry& entry = memo_[dropped.bits()];
  const std::uint64_t bit = std::uint64_t{1} << foil;
  if ((entry.known & bit) == 0) {
    ++evaluations_;
    bool ok = validate_projected(lattice_.base(), lattice_.removal_mask(dropped), plans_.at(foil),
                                 options_);
    entry.known |= bit;
    if (ok) entry.valid |= bit;
  }
  return (entry.valid & bit) != 0;
}

bool FoilValidator::consistent(UnitSet dropped) {
  for (std::size_t i = 0; i < plans_.size(); ++i) {
    if (!valid(dropped, i)) return false;
  }
  return true;
}

std::vector<UnitSet> min_abstraction_set(FoilValidator& validator, UnitSet concretized,
                                         const LatticeSearchOptions& options) {
  const LatticeSpec& lattice = validator.lattice();
  const UnitSet free = lattice.all() - concretized;
  if (!validator.consistent(free | concretized)) {
    throw InconsistentFoilsError("the foils are not valid in any model of the lattice");
  }
  const std::vector<std::size_t> slots = free.indices();
  const std::size_t n = slots.size();
  std::vector<UnitSet> found;
  std::size_t checks = 0;
  for (std::size_t level = 0; level <= n; ++level) {
    if (level == 0) {
      ++checks;
      if (validator.consistent(concretized)) found.push_back(UnitSet{});
      if (!found.empty()) break;
      continue;
    }
    // Gosper's hack over n-bit words with `level` bits set.
    std::uint64_t compact = (level == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << level) - 1;
    for (;;) {
      UnitSet candidate = expand(compact, slots);
      bool dominated = std::any_of(found.begin(), found.end(),
                                   [&](UnitSet m) { return m.is_subset_of(candidate); });
      if (!dominated) {
        if (++checks > options.max_checks) {
          throw ResourceLimitError("minimal abstraction search exceeds " +
                                   std::to_string(options.max_checks) + " checks");
        }
        if (validator.consistent(candidate | concretized)) found.push_back(candidate);
      }
      if (level == n) break;
      std::uint64_t low = compact & (~compact + 1);
      std::uint64_t ripple = compact + low;
      if (n < 64 && (ripple >> n) != 0) break;
      if (ripple == 0) break;
      compact = (((ripple ^ compact) >> 2) / low) | ripple;
    }
  }
  sort_specs(found);
  return found;
}

std::vector<UnitSet> min_abstraction_set(const LatticeSpec& lattice, const FoilSet& foils,
                                         UnitSet concretized,
                                         const LatticeSearchOptions& options) {
  FoilValidator validator(lattice, foils);
  return min_abstraction_set(validator, concretized, options);
}

std::vector<UnitSet> consistent_models(FoilValidator& validator,
                                       const LatticeSearchOptions& options) {
  const std::size_t n = validator.lattice().size();
  if (n > options.enumeration_cap) {
    throw ResourceLimitError("lattice with " + std::to_string(n) + " units exceeds the enumeration cap of " +
                             std::to_string(options.enumeration_cap));
  }
  std::vector<UnitSet> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    if (validator.consistent(UnitSet(bits))) out.emplace_back(bits);
  }
  sort_specs(out);
  return out;
}

std::vector<UnitSet> consistent_models(const LatticeSpec& lattice, const FoilSet& foils,
                                       const LatticeSearchOptions& options) {
  FoilValidator validator(lattice, foils);
  return consistent_models(validator, options);
}

std::vector<UnitSet> minimal_elements(std::vector<UnitSet> sets) {
  sort_specs(sets);
  std::vector<UnitSet> out;
  for (UnitSet s : sets) {
    bool dominated =
        std::any_of(out.begin(), out.end(), [&](UnitSet m) { return m.is_subset_of(s); });
    if (!dominated) out.push_back(s);
  }
  return out;
}

std::vector<UnitSet> carry_forward(const std::vector<UnitSet>& mmin, UnitSet explained) {
  std::vector<UnitSet> moved;
  moved.reserve(mmin.size());
  for (UnitSet m : mmin) moved.push_back(m - explained);
  return minimal_elements(std::move(moved));
}

}  // namespace foilex
