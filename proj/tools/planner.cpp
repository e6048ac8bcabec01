#include "planner.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <unordered_map>

namespace foilex::fixtures {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RelaxedOp {
  FluentList pre;
  FluentList add;
};

std::vector<RelaxedOp> relax(const PlanningModel& model) {
  std::vector<RelaxedOp> ops;
  for (const auto& a : model.actions()) {
    for (const auto& c : a.effects) {
      if (c.add.empty()) continue;
      RelaxedOp op{a.prec, c.add};
      op.pre.insert(op.pre.end(), c.condition.begin(), c.condition.end());
      normalize(op.pre);
      ops.push_back(std::move(op));
    }
  }
  return ops;
}

double h_add(const std::vector<RelaxedOp>& ops, const FluentList& goal, const State& s) {
  std::vector<double> cost(s.size(), kInf);
  for (auto i = s.find_first(); i != State::npos; i = s.find_next(i)) cost[i] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& op : ops) {
      double c = 1.0;
      for (FluentId p : op.pre) {
        c += cost[p];
        if (c == kInf) break;
      }
      if (c == kInf) continue;
      for (FluentId q : op.add) {
        if (c < cost[q]) {
          cost[q] = c;
          changed = true;
        }
      }
    }
  }
  double h = 0.0;
  for (FluentId g : goal) h += cost[g];
  return h;
}

bool holds(const State& s, const FluentList& list) {
  return std::all_of(list.begin(), list.end(), [&](FluentId f) { return s.test(f); });
}

State successor(const State& s, const GroundAction& a) {
  State next = s;
  std::vector<const EffectClause*> fired;
  for (const auto& c : a.effects) {
    if (holds(s, c.condition)) fired.push_back(&c);
  }
  for (const auto* c : fired) {
    for (FluentId f : c->add) next.set(f);
  }
  for (const auto* c : fired) {
    for (FluentId f : c->del) next.reset(f);
  }
  return next;
}

struct StateHash {
  std::size_t operator()(const State& s) const { return boost::hash_value(s); }
};

}  // namespace

std::optional<ResolvedPlan> find_plan(const PlanningModel& model, const PlannerOptions& options) {
  const auto ops = relax(model);
  const auto& actions = model.actions();
  std::vector<std::size_t> order(actions.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  if (options.seed != 0) std::shuffle(order.begin(), order.end(), rng);

  struct Node {
    State state;
    std::size_t parent;
    std::size_t action;
    std::size_t g;
  };
  std::vector<Node> nodes;
  std::unordered_map<State, std::size_t, StateHash> seen;
  using Entry = std::tuple<double, std::size_t, std::size_t>;  // f, tie, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  State init = initial_state(model);
  double h0 = h_add(ops, model.goal(), init);
  if (h0 == kInf) return std::nullopt;
  nodes.push_back({init, 0, 0, 0});
  seen.emplace(init, 0);
  open.emplace(h0, 0, 0);
  std::size_t tie = 1;
  std::size_t expansions = 0;
  while (!open.empty()) {
    auto [f, t, id] = open.top();
    open.pop();
    if (holds(nodes[id].state, model.goal())) {
      ResolvedPlan plan;
      for (std::size_t cur = id; cur != 0; cur = nodes[cur].parent) plan.push_back(nodes[cur].action);
      std::reverse(plan.begin(), plan.end());
      return plan;
    }
    if (++expansions > options.max_expansions) return std::nullopt;
    for (std::size_t ai : order) {
      const auto& a = actions[ai];
      const State& s = nodes[id].state;
      if (!holds(s, a.prec)) continue;
      State next = successor(s, a);
      if (seen.contains(next)) continue;
      double h = h_add(ops, model.goal(), next);
      if (h == kInf) continue;
      std::size_t g = nodes[id].g + 1;
      nodes.push_back({next, id, ai, g});
      seen.emplace(std::move(next), nodes.size() - 1);
      open.emplace(h + options.g_weight * static_cast<double>(g), tie++, nodes.size() - 1);
    }
  }
  return std::nullopt;
}

}  // namespace foilex::fixtures
