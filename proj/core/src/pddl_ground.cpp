#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "foilex/errors.hpp"
#include "foilex/pddl.hpp"

namespace foilex::pddl {
namespace {

class TypeTable {
 public:
  TypeTable(const DomainAst& domain, const ProblemAst& problem) : parents_(domain.types) {
    // A parent used only on the right of " - " is an implicit subtype of object.
    std::vector<std::string> implicit;
    for (const auto& [child, parent] : parents_) {
      if (parent != "object" && !parents_.contains(parent)) implicit.push_back(parent);
    }
    for (const auto& t : implicit) parents_.emplace(t, "object");
    for (const auto& c : domain.constants) add_object(c);
    for (const auto& o : problem.objects) add_object(o);
  }

  bool known(const std::string& type) const { return type == "object" || parents_.contains(type); }

  const std::vector<std::string>& objects_of(const std::string& type) const {
    static const std::vector<std::string> kNone;
    if (!known(type)) throw GroundingError("unknown type '" + type + "'");
    auto it = by_type_.find(type);
    return it == by_type_.end() ? kNone : it->second;
  }

  bool is_object(const std::string& name) const { return declared_.contains(name); }

 private:
  void add_object(const TypedName& object) {
    if (!known(object.type)) {
      throw GroundingError("object '" + object.name + "' has unknown type '" + object.type + "'");
    }
    auto [it, fresh] = declared_.emplace(object.name, object.type);
    if (!fresh) {
      if (it->second != object.type) {
        throw GroundingError("object '" + object.name + "' declared with two types");
      }
      return;
    }
    std::string type = object.type;
    std::set<std::string> seen;
    for (;;) {
      if (!seen.insert(type).second) throw GroundingError("cyclic type hierarchy at '" + type + "'");
      by_type_[type].push_back(object.name);
      if (type == "object") break;
      type = parents_.at(type);
    }
  }

  std::map<std::string, std::string> parents_;
  std::map<std::string, std::string> declared_;
  std::map<std::string, std::vector<std::string>> by_type_;
};

// A schema atom with each term resolved to a parameter slot or a constant.
struct CompiledAtom {
  std::string predicate;
  std::vector<int> slots;  // -1 for constants
  std::vector<std::string> constants;
  bool is_static = false;
  int last_slot = -1;

  Fluent instantiate(const std::vector<const std::string*>& binding) const {
    Fluent f{predicate, {}};
    f.args.reserve(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      f.args.push_back(slots[i] < 0 ? constants[i] : *binding[static_cast<std::size_t>(slots[i])]);
    }
    return f;
  }
};

struct CompiledClause {
  std::vector<CompiledAtom> condition;
  std::vector<CompiledAtom> add;
  std::vector<CompiledAtom> del;
};

class Interner {
 public:
  std::uint32_t id(Fluent f) {
    auto [it, fresh] = ids_.emplace(std::move(f), static_cast<std::uint32_t>(ids_.size()));
    if (fresh) order_.push_back(&it->first);
    return it->second;
  }
  std::size_t size() const { return order_.size(); }
  const Fluent& operator[](std::uint32_t id) const { return *order_[id]; }

 private:
  std::map<Fluent, std::uint32_t> ids_;
  std::vector<const Fluent*> order_;
};

struct RawAction {
  std::string name;
  std::string schema;
  std::vector<std::string> args;
  std::vector<std::uint32_t> prec;
  struct Clause {
    std::vector<std::uint32_t> condition, add, del;
  };
  std::vector<Clause> clauses;
};

class Grounder {
 public:
  Grounder(const DomainAst& domain, const ProblemAst& problem, const GroundingOptions& options)
      : domain_(domain), problem_(problem), options_(options), types_(domain, problem) {
    for (const auto& p : domain_.predicates) arity_[p.name] = p.parameters.size();
    for (const auto& action : domain_.actions) {
      for (const auto& clause : action.effects) {
        for (const auto& a : clause.add) modified_.insert(a.predicate);
        for (const auto& a : clause.del) modified_.insert(a.predicate);
      }
    }
    for (const auto& atom : problem_.init) {
      check_ground_atom(atom, ":init");
      Fluent f{atom.predicate, atom.terms};
      if (is_static(atom.predicate)) {
        static_facts_.insert(f);
      } else {
        init_.push_back(interner_.id(std::move(f)));
      }
    }
    for (const auto& atom : problem_.goal) {
      check_ground_atom(atom, ":goal");
      Fluent f{atom.predicate, atom.terms};
      if (is_static(atom.predicate) && static_facts_.contains(f)) continue;
      goal_.push_back(interner_.id(std::move(f)));
    }
  }

  PlanningModel run() {
    for (const auto& schema : domain_.actions) ground_schema(schema);
    return build();
  }

 private:
  bool is_static(const std::string& predicate) const {
    return options_.compile_statics && !modified_.contains(predicate);
  }

  void check_ground_atom(const Atom& atom, const char* where) const {
    auto it = arity_.find(atom.predicate);
    if (it == arity_.end()) {
      throw GroundingError(std::string(where) + " uses undeclared predicate '" + atom.predicate +
                           "'");
    }
    if (it->second != atom.terms.size()) {
      throw GroundingError(std::string(where) + " atom " + Fluent{atom.predicate, atom.terms}.to_pddl() +
                           " has wrong arity");
    }
    for (const auto& t : atom.terms) {
      if (!types_.is_object(t)) {
        throw GroundingError(std::string(where) + " references unknown object '" + t + "'");
      }
    }
  }

  CompiledAtom compile(const Atom& atom, const std::vector<TypedName>& params) const {
    CompiledAtom c;
    c.predicate = atom.predicate;
    c.is_static = is_static(atom.predicate);
    for (const auto& term : atom.terms) {
      int slot = -1;
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].name == term) slot = static_cast<int>(i);
      }
      c.slots.push_back(slot);
      c.constants.push_back(slot < 0 ? term : std::string());
      c.last_slot = std::max(c.last_slot, slot);
    }
    return c;
  }

  void ground_schema(const ActionSchema& schema) {
    const auto& params = schema.parameters;
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : params) domains.push_back(&types_.objects_of(p.type));

    std::vector<CompiledAtom> prec;
    for (const auto& atom : schema.precondition) prec.push_back(compile(atom, params));
    std::vector<CompiledClause> clauses;
    for (const auto& effect : schema.effects) {
      CompiledClause c;
      for (const auto& atom : effect.condition) c.condition.push_back(compile(atom, params));
      for (const auto& atom : effect.add) c.add.push_back(compile(atom, params));
      for (const auto& atom : effect.del) c.del.push_back(compile(atom, params));
      clauses.push_back(std::move(c));
    }

    // Static precondition atoms checked as soon as their last parameter is bound.
    std::vector<std::vector<const CompiledAtom*>> checks(params.size() + 1);
    for (const auto& atom : prec) {
      if (atom.is_static) checks[static_cast<std::size_t>(atom.last_slot + 1)].push_back(&atom);
    }

    std::vector<const std::string*> binding(params.size(), nullptr);
    auto holds = [&](const CompiledAtom& atom) {
      return static_facts_.contains(atom.instantiate(binding));
    };
    for (const auto* atom : checks[0]) {
      if (!holds(*atom)) return;
    }

    auto emit = [&] {
      RawAction action;
      action.schema = schema.name;
      action.name = schema.name;
      for (const auto* arg : binding) {
        action.name += '_';
        action.name += *arg;
        action.args.push_back(*arg);
      }
      for (const auto& atom : prec) {
        if (!atom.is_static) action.prec.push_back(interner_.id(atom.instantiate(binding)));
      }
      for (const auto& clause : clauses) {
        RawAction::Clause out;
        bool live = true;
        for (const auto& atom : clause.condition) {
          if (atom.is_static) {
            if (!holds(atom)) {
              live = false;
              break;
            }
          } else {
            out.condition.push_back(interner_.id(atom.instantiate(binding)));
          }
        }
        if (!live) continue;
        for (const auto& atom : clause.add) out.add.push_back(interner_.id(atom.instantiate(binding)));
        for (const auto& atom : clause.del) out.del.push_back(interner_.id(atom.instantiate(binding)));
        std::sort(out.add.begin(), out.add.end());
        // A fluent both added and deleted by one clause ends up true.
        std::erase_if(out.del, [&](std::uint32_t f) {
          return std::binary_search(out.add.begin(), out.add.end(), f);
        });
        if (out.add.empty() && out.del.empty()) continue;
        action.clauses.push_back(std::move(out));
      }
      if (actions_.size() >= options_.max_actions) {
        throw ResourceLimitError("grounding exceeds the cap of " +
                                 std::to_string(options_.max_actions) + " actions");
      }
      actions_.push_back(std::move(action));
    };

    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      if (depth == params.size()) {
        emit();
        return;
      }
      for (const auto& object : *domains[depth]) {
        binding[depth] = &object;
        bool ok = true;
        for (const auto* atom : checks[depth + 1]) {
          if (!holds(*atom)) {
            ok = false;
            break;
          }
        }
        if (ok) self(self, depth + 1);
      }
    };
    recurse(recurse, 0);
  }

  PlanningModel build() {
    std::vector<Fluent> all;
    all.reserve(interner_.size());
    for (std::uint32_t i = 0; i < interner_.size(); ++i) all.push_back(interner_[i]);
    auto table = std::make_shared<const FluentTable>(all);
    std::vector<FluentId> remap(interner_.size());
    for (std::uint32_t i = 0; i < interner_.size(); ++i) remap[i] = *table->find(interner_[i]);

    auto convert = [&](const std::vector<std::uint32_t>& ids) {
      FluentList out;
      out.reserve(ids.size());
      for (auto id : ids) out.push_back(remap[id]);
      normalize(out);
      return out;
    };

    std::vector<GroundAction> actions;
    actions.reserve(actions_.size());
    std::set<std::string> names;
    for (auto& raw : actions_) {
      if (!names.insert(raw.name).second) {
        throw GroundingError("ground action name '" + raw.name + "' is ambiguous");
      }
      GroundAction a;
      a.name = std::move(raw.name);
      a.schema = std::move(raw.schema);
      a.args = std::move(raw.args);
      a.prec = convert(raw.prec);
      for (const auto& c : raw.clauses) {
        a.effects.push_back({convert(c.condition), convert(c.add), convert(c.del), false});
      }
      actions.push_back(std::move(a));
    }

    FluentList fluents(table->size());
    for (FluentId i = 0; i < table->size(); ++i) fluents[i] = i;
    return PlanningModel(table, std::move(fluents), std::move(actions), convert(init_),
                         convert(goal_));
  }

  const DomainAst& domain_;
  const ProblemAst& problem_;
  GroundingOptions options_;
  TypeTable types_;
  std::map<std::string, std::size_t> arity_;
  std::set<std::string> modified_;
  std::set<Fluent> static_facts_;
  Interner interner_;
  std::vector<std::uint32_t> init_;
  std::vector<std::uint32_t> goal_;
  std::vector<RawAction> actions_;
};

void write_conjunction(std::ostream& out, const PlanningModel& model, const FluentList& list) {
  out << "(and";
  for (FluentId f : list) out << ' ' << model.table()[f].to_pddl();
  out << ')';
}

}  // namespace

PlanningModel ground(const DomainAst& domain, const ProblemAst& problem,
                     const GroundingOptions& options) {
  if (!problem.domain.empty() && problem.domain != domain.name) {
    throw GroundingError("problem targets domain '" + problem.domain + "', got '" + domain.name +
                         "'");
  }
  return Grounder(domain, problem, options).run();
}

std::string write_domain(const PlanningModel& model, std::string_view name) {
  if (!model.deterministic()) {
    throw InputError("cannot write a model with non-deterministic effects as PDDL");
  }
  std::set<std::string> objects;
  std::map<std::string, std::size_t> predicates;
  for (FluentId f : model.fluents()) {
    const Fluent& fluent = model.table()[f];
    objects.insert(fluent.args.begin(), fluent.args.end());
    auto [it, fresh] = predicates.emplace(fluent.predicate, fluent.args.size());
    if (!fresh && it->second != fluent.args.size()) {
      throw InputError("predicate '" + fluent.predicate + "' used with two arities");
    }
  }

  std::ostringstream out;
  out << "(define (domain " << name << ")\n";
  out << "  (:requirements :strips :conditional-effects)\n";
  out << "  (:constants";
  for (const auto& o : objects) out << ' ' << o;
  out << ")\n  (:predicates";
  for (const auto& [pred, arity] : predicates) {
    out << "\n    (" << pred;
    for (std::size_t i = 0; i < arity; ++i) out << " ?x" << i;
    out << ')';
  }
  out << ")\n";
  for (const auto& action : model.actions()) {
    out << "  (:action " << action.name << "\n    :parameters ()\n    :precondition ";
    write_conjunction(out, model, action.prec);
    out << "\n    :effect (and";
    for (const auto& clause : action.effects) {
      out << "\n      (when ";
      write_conjunction(out, model, clause.condition);
      out << " (and";
      for (FluentId f : clause.add) out << ' ' << model.table()[f].to_pddl();
      for (FluentId f : clause.del) out << " (not " << model.table()[f].to_pddl() << ')';
      out << "))";
    }
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string write_problem(const PlanningModel& model, std::string_view name,
                          std::string_view domain_name) {
  std::ostringstream out;
  out << "(define (problem " << name << ")\n  (:domain " << domain_name << ")\n  (:init";
  for (FluentId f : model.init()) out << "\n    " << model.table()[f].to_pddl();
  out << ")\n  (:goal ";
  write_conjunction(out, model, model.goal());
  out << "))\n";
  return out.str();
}

}  // namespace foilex::pddl
