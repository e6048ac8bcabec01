#include "foilex/explain.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "foilex/abstraction.hpp"
#include "foilex/errors.hpp"

namespace foilex {
namespace {

// Ratio a_cost / a_gain strictly below b_cost / b_gain, then cheaper, then lower index.
bool better_ratio(std::size_t a_cost, std::size_t a_gain, std::size_t a_index, std::size_t b_cost,
                  std::size_t b_gain, std::size_t b_index) {
  const auto lhs = static_cast<std::uint64_t>(a_cost) * b_gain;
  const auto rhs = static_cast<std::uint64_t>(b_cost) * a_gain;
  if (lhs != rhs) return lhs < rhs;
  if (a_cost != b_cost) return a_cost < b_cost;
  return a_index < b_index;
}

FoilMask foils_of(const ExplanationProblem& problem, const PairMask& pairs) {
  FoilMask out = 0;
  for (auto i = pairs.find_first(); i != PairMask::npos; i = pairs.find_next(i)) {
    out |= FoilMask{1} << problem.foil_of(i);
  }
  return out;
}

UnitSet units_touching(const ExplanationProblem& problem, const PairMask& pairs) {
  UnitSet out;
  for (auto i = pairs.find_first(); i != PairMask::npos; i = pairs.find_next(i)) {
    out = out | problem.mmin()[problem.member_of(i)];
  }
  return out;
}

Explanation finish(const ExplanationProblem& problem, UnitSet units, std::size_t expanded,
                   std::size_t generated, std::vector<std::string> findings) {
  const LatticeSpec& lattice = problem.lattice();
  Explanation e;
  e.units = units;
  e.ids = lattice.ids(units);
  e.cost = lattice.cost(units);
  for (std::size_t i : units.indices()) e.unit_costs[lattice.unit(i).id] = lattice.unit_cost(i);
  e.expanded = expanded;
  e.generated = generated;
  e.findings = std::move(findings);
  e.verified = verify_materialized(lattice, problem.mmin(), problem.foils(), units,
                                   problem.execution_options());
  if (!e.verified) e.findings.push_back("explanation failed the materialized re-check");
  return e;
}

std::string describe(const LatticeSpec& lattice, UnitSet units) {
  std::string out = "{";
  for (const auto& id : lattice.ids(units)) {
    if (out.size() > 1) out += ", ";
    out += id;
  }
  return out + "}";
}

int highest_index(UnitSet s) { return s.empty() ? -1 : 63 - std::countl_zero(s.bits()); }

Explanation best_first(const ExplanationProblem& problem, const SearchOptions& options,
                       bool heuristic) {
  const LatticeSpec& lattice = problem.lattice();
  const bool exact = options.policy == ResolutionPolicy::kExact;

  struct Node {
    UnitSet units;
    std::size_t g;
    std::size_t f;
    std::size_t parent;
    std::size_t added;
  };
  std::vector<Node> nodes;
  std::vector<PairMask> open;
  auto worse = [&](std::size_t a, std::size_t b) {
    const Node& x = nodes[a];
    const Node& y = nodes[b];
    if (x.f != y.f) return x.f > y.f;
    return lex_less(y.units, x.units);
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> frontier(worse);

  PairMask all(problem.pair_count());
  all.set();
  const FoilMask all_foils = foils_of(problem, all);
  nodes.push_back({UnitSet{}, 0, heuristic ? heuristic_estimate(problem, {}, all_foils) : 0, 0, 0});
  open.emplace_back(exact ? problem.open_pairs(UnitSet{}) : all);
  frontier.push(0);

  std::size_t expanded = 0;
  while (!frontier.empty()) {
    const std::size_t id = frontier.top();
    frontier.pop();
    const Node node = nodes[id];
    if (id != 0) {
      PairMask remaining = open[node.parent];
      if (exact) {
        for (auto i = remaining.find_first(); i != PairMask::npos; i = remaining.find_next(i)) {
          if (problem.refuted(node.units, i)) remaining.reset(i);
        }
      } else {
        remaining -= problem.single_cover(node.added);
      }
      open[id] = std::move(remaining);
    }
    if (open[id].none()) return finish(problem, node.units, expanded, nodes.size(), {});
    if (++expanded > options.max_expansions) {
      throw ResourceLimitError("explanation search exceeds " +
                               std::to_string(options.max_expansions) + " expansions");
    }

    // Each subset is generated once, by appending units in increasing index
    // order; units outside every member with open pairs cannot help.
    const UnitSet useful = units_touching(problem, open[id]) - node.units;
    const FoilMask open_foils = foils_of(problem, open[id]);
    for (std::size_t p : useful.indices()) {
      if (static_cast<int>(p) <= highest_index(node.units)) continue;
      Node child{node.units.with(p), node.g + lattice.unit_cost(p), 0, id, p};
      std::size_t h = 0;
      if (heuristic) {
        FoilMask remaining = open_foils;
        if (!exact) remaining = foils_of(problem, open[id] - problem.single_cover(p));
        h = heuristic_estimate(problem, child.units, remaining);
      }
      child.f = child.g + h;
      nodes.push_back(child);
      open.emplace_back();
      frontier.push(nodes.size() - 1);
    }
  }
  throw InfeasibleExplanationError("no set of concretizations refutes every foil");
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::kBlind:
      return "blind";
    case Method::kAStar:
      return "astar";
    case Method::kGreedy:
      return "greedy";
    case Method::kOracle:
      return "oracle";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "blind") return Method::kBlind;
  if (text == "astar" || text == "heuristic") return Method::kAStar;
  if (text == "greedy") return Method::kGreedy;
  if (text == "oracle") return Method::kOracle;
  throw InputError("unknown method '" + std::string(text) + "'");
}

ExplanationProblem::ExplanationProblem(const LatticeSpec& lattice, FoilSet foils,
                                       ExecutionOptions options)
    : lattice_(lattice),
      options_(options),
      validator_(std::make_unique<FoilValidator>(lattice, foils, options)) {
  mmin_ = min_abstraction_set(*validator_);
  init();
}

ExplanationProblem::ExplanationProblem(const LatticeSpec& lattice, FoilSet foils,
                                       std::vector<UnitSet> mmin, ExecutionOptions options)
    : lattice_(lattice),
      options_(options),
      validator_(std::make_unique<FoilValidator>(lattice, foils, options)),
      mmin_(std::move(mmin)) {
  if (mmin_.empty()) throw InputError("minimal abstraction set is empty");
  init();
}

void ExplanationProblem::init() {
  covers_.assign(lattice_.size(), PairMask());
  cover_ready_.assign(lattice_.size(), false);

  const PlanningModel& base = lattice_.base();
  const auto& plans = foils();
  std::vector<ResolvedPlan> resolved;
  resolved.reserve(plans.size());
  for (const auto& foil : plans) resolved.push_back(resolve_plan(base, foil));

  syntactic_.assign(lattice_.size(), 0);
  for (std::size_t p = 0; p < lattice_.size(); ++p) {
    FluentMask mask = lattice_.removal_mask(UnitSet::single(p));
    if (intersects(base.goal(), mask)) {
      syntactic_[p] = plans.empty() ? 0 : (~FoilMask{0} >> (64 - plans.size()));
      continue;
    }
    for (std::size_t f = 0; f < resolved.size(); ++f) {
      for (std::size_t index : resolved[f]) {
        const GroundAction& a = base.actions()[index];
        bool hit = intersects(a.prec, mask) ||
                   std::any_of(a.effects.begin(), a.effects.end(),
                               [&](const EffectClause& c) { return intersects(c.condition, mask); });
        if (hit) {
          syntactic_[p] |= FoilMask{1} << f;
          break;
        }
      }
    }
  }
}

bool ExplanationProblem::refuted(UnitSet explained, std::size_t pair) const {
  return !validator_->valid(mmin_[member_of(pair)] - explained, foil_of(pair));
}

PairMask ExplanationProblem::open_pairs(UnitSet explained) const {
  PairMask out(pair_count());
  for (std::size_t i = 0; i < pair_count(); ++i) {
    if (!refuted(explained, i)) out.set(i);
  }
  return out;
}

const PairMask& ExplanationProblem::single_cover(std::size_t p) const {
  if (!cover_ready_.at(p)) {
    PairMask cover(pair_count());
    for (std::size_t i = 0; i < pair_count(); ++i) {
      if (mmin_[member_of(i)].contains(p) && refuted(UnitSet::single(p), i)) cover.set(i);
    }
    covers_[p] = std::move(cover);
    cover_ready_[p] = true;
  }
  return covers_[p];
}

std::size_t ExplanationProblem::cover_bound_k() const {
  std::size_t k = 0;
  for (std::size_t p = 0; p < lattice_.size(); ++p) k = std::max(k, single_cover(p).count());
  return k;
}

UnitSet ExplanationProblem::relevant_units() const {
  UnitSet out;
  for (UnitSet m : mmin_) out = out | m;
  return out;
}

FoilMask ExplanationProblem::syntactic_cover(std::size_t p) const { return syntactic_.at(p); }

FoilMask resolution_set(FoilValidator& validator, const std::vector<UnitSet>& models,
                        std::size_t p) {
  for (UnitSet m : models) {
    if (!m.contains(p)) {
      throw InputError("unit '" + validator.lattice().unit(p).id +
                       "' is not abstracted in every model of the set");
    }
  }
  FoilMask out = 0;
  for (std::size_t f = 0; f < validator.foil_count(); ++f) {
    bool everywhere = std::all_of(models.begin(), models.end(),
                                  [&](UnitSet m) { return !validator.valid(m.without(p), f); });
    if (everywhere) out |= FoilMask{1} << f;
  }
  return out;
}

std::size_t heuristic_estimate(const ExplanationProblem& problem, UnitSet explained,
                               FoilMask remaining) {
  if (remaining == 0) return 0;
  const LatticeSpec& lattice = problem.lattice();
  UnitSet candidates = problem.relevant_units() - explained;
  std::size_t total = 0;
  while (remaining != 0) {
    std::size_t best = lattice.size();
    std::size_t best_gain = 0;
    for (std::size_t p : candidates.indices()) {
      auto gain = static_cast<std::size_t>(std::popcount(problem.syntactic_cover(p) & remaining));
      if (gain == 0) continue;
      if (best == lattice.size() ||
          better_ratio(lattice.unit_cost(p), gain, p, lattice.unit_cost(best), best_gain, best)) {
        best = p;
        best_gain = gain;
      }
    }
    if (best == lattice.size()) return lattice.cost(lattice.all() - explained);
    total += lattice.unit_cost(best);
    remaining &= ~problem.syntactic_cover(best);
    candidates = candidates.without(best);
  }
  return total;
}

Explanation blind_search(const ExplanationProblem& problem, const SearchOptions& options) {
  return best_first(problem, options, false);
}

Explanation astar_search(const ExplanationProblem& problem, const SearchOptions& options) {
  return best_first(problem, options, options.use_heuristic);
}

Explanation greedy_cover(const ExplanationProblem& problem, const SearchOptions& /*options*/) {
  const LatticeSpec& lattice = problem.lattice();
  std::vector<std::string> findings;
  PairMask open(problem.pair_count());
  open.set();
  UnitSet chosen;

  auto pick = [&](auto&& cover_of) {
    std::size_t best = lattice.size();
    std::size_t best_gain = 0;
    for (std::size_t p : (problem.relevant_units() - chosen).indices()) {
      std::size_t gain = (cover_of(p) & open).count();
      if (gain == 0) continue;
      if (best == lattice.size() ||
          better_ratio(lattice.unit_cost(p), gain, p, lattice.unit_cost(best), best_gain, best)) {
        best = p;
        best_gain = gain;
      }
    }
    return best;
  };

  while (open.any()) {
    std::size_t next = pick([&](std::size_t p) -> const PairMask& { return problem.single_cover(p); });
    if (next != lattice.size()) {
      chosen = chosen.with(next);
      open -= problem.single_cover(next);
      continue;
    }

    // No single unit covers an open pair: recompute against the current models.
    PairMask still = problem.open_pairs(chosen) & open;
    if (still != open) {
      findings.push_back("concretizing " + describe(lattice, chosen) + " jointly refutes " +
                         std::to_string((open - still).count()) +
                         " foil/model pair(s) that no single chosen unit refutes");
      open = still;
      if (open.none()) break;
    }
    std::vector<PairMask> exact(lattice.size());
    for (std::size_t p : (problem.relevant_units() - chosen).indices()) {
      exact[p] = PairMask(problem.pair_count());
      for (auto i = open.find_first(); i != PairMask::npos; i = open.find_next(i)) {
        if (problem.mmin()[problem.member_of(i)].contains(p) &&
            problem.refuted(chosen.with(p), i)) {
          exact[p].set(i);
        }
      }
    }
    next = pick([&](std::size_t p) -> const PairMask& { return exact[p]; });
    if (next != lattice.size()) {
      findings.push_back("resolution sets of " + lattice.unit(next).id +
                         " grow once " + describe(lattice, chosen) + " is concretized");
      chosen = chosen.with(next);
      open -= exact[next];
      continue;
    }

    // Nothing helps in one step: take the cheapest unit still abstracted in an open pair.
    UnitSet touching = units_touching(problem, open) - chosen;
    if (touching.empty()) {
      throw InfeasibleExplanationError("no set of concretizations refutes every foil");
    }
    std::size_t cheapest = lattice.size();
    for (std::size_t p : touching.indices()) {
      if (cheapest == lattice.size() || lattice.unit_cost(p) < lattice.unit_cost(cheapest)) {
        cheapest = p;
      }
    }
    findings.push_back("no unit refutes an open pair on its own; concretizing " +
                       lattice.unit(cheapest).id + " without immediate gain");
    chosen = chosen.with(cheapest);
    open &= problem.open_pairs(chosen);
  }
  return finish(problem, chosen, 0, 0, std::move(findings));
}

Explanation brute_force_oracle(const ExplanationProblem& problem, const SearchOptions& options) {
  const LatticeSpec& lattice = problem.lattice();
  if (lattice.size() > options.oracle_cap) {
    throw ResourceLimitError("oracle supports at most " + std::to_string(options.oracle_cap) +
                             " units, lattice has " + std::to_string(lattice.size()));
  }
  std::vector<UnitSet> subsets;
  subsets.reserve(std::size_t{1} << lattice.size());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << lattice.size()); ++bits) {
    subsets.emplace_back(bits);
  }
  std::sort(subsets.begin(), subsets.end(), [&](UnitSet a, UnitSet b) {
    std::size_t ca = lattice.cost(a);
    std::size_t cb = lattice.cost(b);
    if (ca != cb) return ca < cb;
    return lex_less(a, b);
  });
  std::size_t tried = 0;
  for (UnitSet s : subsets) {
    ++tried;
    if (verify_materialized(lattice, problem.mmin(), problem.foils(), s,
                            problem.execution_options())) {
      return finish(problem, s, tried, subsets.size(), {});
    }
  }
  throw InfeasibleExplanationError("no set of concretizations refutes every foil");
}

Explanation explain(const ExplanationProblem& problem, Method method,
                    const SearchOptions& options) {
  switch (method) {
    case Method::kBlind:
      return blind_search(problem, options);
    case Method::kAStar:
      return astar_search(problem, options);
    case Method::kGreedy:
      return greedy_cover(problem, options);
    case Method::kOracle:
      return brute_force_oracle(problem, options);
  }
  throw InputError("unknown method");
}

bool verify_materialized(const LatticeSpec& lattice, const std::vector<UnitSet>& mmin,
                         const FoilSet& foils, UnitSet explained,
                         const ExecutionOptions& options) {
  for (UnitSet member : mmin) {
    PlanningModel model = project_model(lattice.base(), lattice.removal_mask(member - explained));
    for (const auto& foil : foils) {
      if (validate_plan_nd(model, foil, options)) return false;
    }
  }
  return true;
}

}  // namespace foilex
