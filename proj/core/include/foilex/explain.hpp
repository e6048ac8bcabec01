#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "foilex/execution.hpp"
#include "foilex/lattice.hpp"

namespace foilex {

enum class Method { kBlind, kAStar, kGreedy, kOracle };

const char* to_string(Method method);
/// Accepts "blind", "astar" (or "heuristic"), "greedy", "oracle". Throws InputError.
Method parse_method(std::string_view text);

/// How blind and A* search decide which foils a node still has to refute.
enum class ResolutionPolicy {
  /// Validate every remaining (member, foil) pair against the node's models.
  kExact,
  /// Union of single-unit resolution sets computed once against M_min.
  kTrustUnion,
};

struct SearchOptions {
  ResolutionPolicy policy = ResolutionPolicy::kExact;
  /// A* only; false turns the heuristic off (h = 0).
  bool use_heuristic = true;
  std::size_t max_expansions = 5'000'000;
  std::size_t oracle_cap = 12;
};

/// Bit i is foil i.
using FoilMask = std::uint64_t;
/// Bit (member * |F| + foil).
using PairMask = boost::dynamic_bitset<std::uint64_t>;

struct Explanation {
  UnitSet units;
  std::vector<std::string> ids;
  std::size_t cost = 0;
  std::map<std::string, std::size_t> unit_costs;
  std::size_t expanded = 0;
  std::size_t generated = 0;
  /// Result of the independent check on materialized projections.
  bool verified = false;
  /// Observations worth reporting, e.g. joint concretizations that refute
  /// foils no single unit refutes.
  std::vector<std::string> findings;
};

/// A lattice, a foil set and the minimal abstraction set of that pair.
class ExplanationProblem {
 public:
  /// Computes M_min. Throws InconsistentFoilsError.
  ExplanationProblem(const LatticeSpec& lattice, FoilSet foils, ExecutionOptions options = {});
  ExplanationProblem(const LatticeSpec& lattice, FoilSet foils, std::vector<UnitSet> mmin,
                     ExecutionOptions options = {});

  const LatticeSpec& lattice() const { return lattice_; }
  const FoilSet& foils() const { return validator_->foils(); }
  const std::vector<UnitSet>& mmin() const { return mmin_; }
  FoilValidator& validator() const { return *validator_; }
  const ExecutionOptions& execution_options() const { return options_; }

  std::size_t pair_count() const { return mmin_.size() * foils().size(); }
  std::size_t member_of(std::size_t pair) const { return pair / foils().size(); }
  std::size_t foil_of(std::size_t pair) const { return pair % foils().size(); }

  /// Whether concretizing `explained` refutes foil f in member m.
  bool refuted(UnitSet explained, std::size_t pair) const;
  /// Pairs still open after concretizing `explained`, checked exactly.
  PairMask open_pairs(UnitSet explained) const;
  /// Pairs refuted by concretizing unit p alone.
  const PairMask& single_cover(std::size_t p) const;
  /// Largest single-unit cover; the k of the greedy approximation bound.
  std::size_t cover_bound_k() const;
  /// Units dropped in some member of M_min.
  UnitSet relevant_units() const;
  /// Syntactic over-approximation of the foils unit p can refute.
  FoilMask syntactic_cover(std::size_t p) const;

 private:
  void init();

  const LatticeSpec& lattice_;
  ExecutionOptions options_;
  std::unique_ptr<FoilValidator> validator_;
  std::vector<UnitSet> mmin_;
  mutable std::vector<PairMask> covers_;
  mutable std::vector<bool> cover_ready_;
  std::vector<FoilMask> syntactic_;
};

/// Strict resolution set: foils refuted in every model of `models` once
/// p is concretized. Throws InputError when p is not dropped in some model.
FoilMask resolution_set(FoilValidator& validator, const std::vector<UnitSet>& models,
                        std::size_t p);

/// Greedy weighted cover over the syntactic resolution sets of the units not
/// in `explained`, restricted to the foils in `remaining`. Falls back to the
/// summed cost of those units when some foil cannot be covered.
std::size_t heuristic_estimate(const ExplanationProblem& problem, UnitSet explained,
                               FoilMask remaining);

Explanation blind_search(const ExplanationProblem& problem, const SearchOptions& options = {});
Explanation astar_search(const ExplanationProblem& problem, const SearchOptions& options = {});
Explanation greedy_cover(const ExplanationProblem& problem, const SearchOptions& options = {});
/// Exhaustive scan in cost order on materialized projections. Throws
/// ResourceLimitError above options.oracle_cap units.
Explanation brute_force_oracle(const ExplanationProblem& problem,
                               const SearchOptions& options = {});

Explanation explain(const ExplanationProblem& problem, Method method,
                    const SearchOptions& options = {});

/// Checks, by projecting each member minus `explained` and replaying every
/// foil, that no foil stays valid in any member.
bool verify_materialized(const LatticeSpec& lattice, const std::vector<UnitSet>& mmin,
                         const FoilSet& foils, UnitSet explained,
                         const ExecutionOptions& options = {});

}  // namespace foilex
