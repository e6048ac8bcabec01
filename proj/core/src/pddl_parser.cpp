#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "foilex/errors.hpp"
#include "foilex/pddl.hpp"

namespace foilex::pddl {
namespace {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  bool head_is(std::string_view s) const {
    return is_list && !items.empty() && items.front().is_atom(s);
  }
};

[[noreturn]] void fail(const std::string& message, const SourcePos& pos) {
  throw ParseError(message, pos.line, pos.column);
}

[[noreturn]] void unsupported(const std::string& feature, const SourcePos& pos) {
  throw UnsupportedFeatureError(feature, pos.line, pos.column);
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  SExpr read_document() {
    skip_space();
    if (at_end()) fail("empty input", here());
    SExpr doc = read();
    skip_space();
    if (!at_end()) fail("unexpected trailing input", here());
    if (!doc.is_list) fail("expected a parenthesized definition", doc.pos);
    return doc;
  }

 private:
  bool at_end() const { return index_ >= text_.size(); }
  SourcePos here() const { return {line_, column_}; }

  void advance() {
    if (text_[index_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++index_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = text_[index_];
      if (c == ';') {
        while (!at_end() && text_[index_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (at_end()) fail("unexpected end of input", here());
    SExpr node;
    node.pos = here();
    char c = text_[index_];
    if (c == ')') fail("unbalanced ')'", here());
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (at_end()) fail("missing ')' for list opened here", node.pos);
        if (text_[index_] == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
      return node;
    }
    while (!at_end()) {
      c = text_[index_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      node.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t index_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

const std::set<std::string, std::less<>> kSupportedRequirements = {
    ":strips", ":typing", ":conditional-effects", ":action-costs"};

bool is_variable(std::string_view term) { return !term.empty() && term.front() == '?'; }

const std::string& expect_atom(const SExpr& e, const char* what) {
  if (e.is_list) fail(std::string("expected ") + what, e.pos);
  return e.atom;
}

std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin) {
  std::vector<TypedName> out;
  std::size_t pending_from = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    if (item.is_atom("-")) {
      if (i + 1 >= items.size()) fail("missing type after '-'", item.pos);
      const SExpr& type = items[i + 1];
      if (type.head_is("either")) unsupported("either types", type.pos);
      const std::string& type_name = expect_atom(type, "type name");
      for (std::size_t k = pending_from; k < out.size(); ++k) out[k].type = type_name;
      pending_from = out.size();
      ++i;
      continue;
    }
    out.push_back({expect_atom(item, "name"), "object"});
  }
  return out;
}

void check_requirements(const SExpr& section, std::vector<std::string>& requirements) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const std::string& flag = expect_atom(section.items[i], "requirement flag");
    if (!kSupportedRequirements.contains(flag)) unsupported(flag, section.items[i].pos);
    requirements.push_back(flag);
  }
}

class DomainParser {
 public:
  DomainAst parse(const SExpr& doc) {
    if (!doc.head_is("define")) fail("expected (define ...)", doc.pos);
    if (doc.items.size() < 2 || !doc.items[1].head_is("domain") || doc.items[1].items.size() != 2) {
      fail("expected (domain <name>)", doc.items.size() > 1 ? doc.items[1].pos : doc.pos);
    }
    ast_.name = expect_atom(doc.items[1].items[1], "domain name");

    for (std::size_t i = 2; i < doc.items.size(); ++i) {
      const SExpr& section = doc.items[i];
      if (!section.is_list || section.items.empty() || section.items[0].is_list) {
        fail("expected a domain section", section.pos);
      }
      const std::string& key = section.items[0].atom;
      if (key == ":requirements") {
        check_requirements(section, ast_.requirements);
      } else if (key == ":types") {
        for (const auto& t : parse_typed_list(section.items, 1)) ast_.types[t.name] = t.type;
      } else if (key == ":constants") {
        auto constants = parse_typed_list(section.items, 1);
        ast_.constants.insert(ast_.constants.end(), constants.begin(), constants.end());
      } else if (key == ":predicates") {
        parse_predicates(section);
      } else if (key == ":functions") {
        parse_functions(section);
      } else if (key == ":action") {
        actions_.push_back(&section);
      } else if (key == ":durative-action") {
        unsupported(":durative-actions", section.pos);
      } else if (key == ":derived") {
        unsupported(":derived-predicates", section.pos);
      } else if (key == ":constraints") {
        unsupported(":constraints", section.pos);
      } else {
        fail("unknown domain section '" + key + "'", section.pos);
      }
    }
    for (const SExpr* action : actions_) ast_.actions.push_back(parse_action(*action));
    if (ignored_cost_effects_ > 0) {
      ast_.warnings.push_back("ignored " + std::to_string(ignored_cost_effects_) +
                              " action-cost effect(s); action costs do not affect explanations");
    }
    return std::move(ast_);
  }

 private:
  bool has_requirement(std::string_view flag) const {
    return std::find(ast_.requirements.begin(), ast_.requirements.end(), flag) !=
           ast_.requirements.end();
  }

  void parse_predicates(const SExpr& section) {
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& decl = section.items[i];
      if (!decl.is_list || decl.items.empty()) fail("expected predicate declaration", decl.pos);
      PredicateDecl p;
      p.name = expect_atom(decl.items[0], "predicate name");
      p.parameters = parse_typed_list(decl.items, 1);
      if (arity_.contains(p.name)) fail("predicate '" + p.name + "' declared twice", decl.pos);
      arity_[p.name] = p.parameters.size();
      ast_.predicates.push_back(std::move(p));
    }
  }

  void parse_functions(const SExpr& section) {
    if (!has_requirement(":action-costs")) unsupported(":numeric-fluents", section.pos);
    for (std::size_t i = 1; i < section.items.size(); ++i) {
      const SExpr& item = section.items[i];
      if (item.is_atom("-")) {
        if (i + 1 < section.items.size() && section.items[i + 1].is_atom("number")) {
          ++i;
          continue;
        }
        unsupported(":numeric-fluents", item.pos);
      }
      if (!item.head_is("total-cost") || item.items.size() != 1) {
        unsupported(":numeric-fluents", item.pos);
      }
    }
  }

  void check_atom(const Atom& atom, const std::set<std::string>& variables) const {
    auto it = arity_.find(atom.predicate);
    if (it == arity_.end()) fail("undeclared predicate '" + atom.predicate + "'", atom.pos);
    if (it->second != atom.terms.size()) {
      fail("predicate '" + atom.predicate + "' expects " + std::to_string(it->second) +
               " argument(s)",
           atom.pos);
    }
    for (const auto& term : atom.terms) {
      if (is_variable(term)) {
        if (!variables.contains(term)) fail("unbound variable '" + term + "'", atom.pos);
      } else if (std::none_of(ast_.constants.begin(), ast_.constants.end(),
                              [&](const TypedName& c) { return c.name == term; })) {
        fail("unknown constant '" + term + "'", atom.pos);
      }
    }
  }

  static Atom to_atom(const SExpr& e) {
    if (!e.is_list || e.items.empty() || e.items[0].is_list) fail("expected an atom", e.pos);
    Atom atom;
    atom.predicate = e.items[0].atom;
    atom.pos = e.pos;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      atom.terms.push_back(expect_atom(e.items[i], "term"));
    }
    return atom;
  }

  // Conjunction of positive atoms.
  void parse_conjunction(const SExpr& e, std::vector<Atom>& out) const {
    if (!e.is_list) fail("expected a formula", e.pos);
    if (e.items.empty()) return;
    if (e.items[0].is_list) fail("expected a formula", e.pos);
    const std::string& head = e.items[0].atom;
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) parse_conjunction(e.items[i], out);
    } else if (head == "not") {
      unsupported(":negative-preconditions", e.pos);
    } else if (head == "or" || head == "imply") {
      unsupported(":disjunctive-preconditions", e.pos);
    } else if (head == "exists") {
      unsupported(":existential-preconditions", e.pos);
    } else if (head == "forall") {
      unsupported(":universal-preconditions", e.pos);
    } else if (head == "=") {
      unsupported(":equality", e.pos);
    } else if (head == "<" || head == ">" || head == "<=" || head == ">=") {
      unsupported(":numeric-fluents", e.pos);
    } else {
      out.push_back(to_atom(e));
    }
  }

  void parse_literals(const SExpr& e, EffectAst& clause, bool allow_when,
                      std::vector<EffectAst>& conditional) {
    if (!e.is_list) fail("expected an effect", e.pos);
    if (e.items.empty()) return;
    if (e.items[0].is_list) fail("expected an effect", e.pos);
    const std::string& head = e.items[0].atom;
    if (head == "and") {
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        parse_literals(e.items[i], clause, allow_when, conditional);
      }
    } else if (head == "not") {
      if (e.items.size() != 2) fail("expected (not <atom>)", e.pos);
      clause.del.push_back(to_atom(e.items[1]));
    } else if (head == "when") {
      if (!allow_when) unsupported("nested conditional effects", e.pos);
      if (e.items.size() != 3) fail("expected (when <condition> <effect>)", e.pos);
      EffectAst when;
      when.conditional = true;
      parse_conjunction(e.items[1], when.condition);
      parse_literals(e.items[2], when, false, conditional);
      conditional.push_back(std::move(when));
    } else if (head == "increase" || head == "decrease" || head == "assign" ||
               head == "scale-up" || head == "scale-down") {
      bool cost = head == "increase" && e.items.size() == 3 && e.items[1].head_is("total-cost");
      if (!cost || !has_requirement(":action-costs")) unsupported(":numeric-fluents", e.pos);
      ++ignored_cost_effects_;
    } else if (head == "forall") {
      unsupported(":universal-effects", e.pos);
    } else {
      clause.add.push_back(to_atom(e));
    }
  }

  ActionSchema parse_action(const SExpr& section) {
    ActionSchema action;
    action.pos = section.pos;
    if (section.items.size() < 2) fail("expected action name", section.pos);
    action.name = expect_atom(section.items[1], "action name");
    bool seen_params = false;
    for (std::size_t i = 2; i < section.items.size(); i += 2) {
      const std::string& key = expect_atom(section.items[i], "action keyword");
      if (i + 1 >= section.items.size()) fail("missing value for " + key, section.items[i].pos);
      const SExpr& value = section.items[i + 1];
      if (key == ":parameters") {
        if (!value.is_list) fail("expected parameter list", value.pos);
        action.parameters = parse_typed_list(value.items, 0);
        seen_params = true;
      } else if (key == ":precondition") {
        parse_conjunction(value, action.precondition);
      } else if (key == ":effect") {
        EffectAst unconditional;
        std::vector<EffectAst> conditional;
        parse_literals(value, unconditional, true, conditional);
        if (!unconditional.add.empty() || !unconditional.del.empty()) {
          action.effects.push_back(std::move(unconditional));
        }
        for (auto& c : conditional) action.effects.push_back(std::move(c));
      } else {
        fail("unknown action keyword '" + key + "'", section.items[i].pos);
      }
    }
    (void)seen_params;

    std::set<std::string> variables;
    for (const auto& p : action.parameters) {
      if (!is_variable(p.name)) fail("parameter must start with '?'", action.pos);
      if (!variables.insert(p.name).second) fail("duplicate parameter " + p.name, action.pos);
    }
    for (const auto& atom : action.precondition) check_atom(atom, variables);
    for (const auto& clause : action.effects) {
      for (const auto& atom : clause.condition) check_atom(atom, variables);
      for (const auto& atom : clause.add) check_atom(atom, variables);
      for (const auto& atom : clause.del) check_atom(atom, variables);
    }
    return action;
  }

  DomainAst ast_;
  std::map<std::string, std::size_t> arity_;
  std::vector<const SExpr*> actions_;
  std::size_t ignored_cost_effects_ = 0;
};

Atom ground_atom(const SExpr& e) {
  if (!e.is_list || e.items.empty() || e.items[0].is_list) fail("expected an atom", e.pos);
  Atom atom;
  atom.predicate = e.items[0].atom;
  atom.pos = e.pos;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const std::string& term = expect_atom(e.items[i], "object name");
    if (is_variable(term)) fail("variables are not allowed here", e.items[i].pos);
    atom.terms.push_back(term);
  }
  return atom;
}

void parse_goal(const SExpr& e, std::vector<Atom>& out) {
  if (!e.is_list) fail("expected a goal formula", e.pos);
  if (e.items.empty()) return;
  if (e.items[0].is_list) fail("expected a goal formula", e.pos);
  const std::string& head = e.items[0].atom;
  if (head == "and") {
    for (std::size_t i = 1; i < e.items.size(); ++i) parse_goal(e.items[i], out);
  } else if (head == "not") {
    unsupported(":negative-preconditions", e.pos);
  } else if (head == "or" || head == "imply") {
    unsupported(":disjunctive-preconditions", e.pos);
  } else if (head == "exists" || head == "forall") {
    unsupported(":quantified-preconditions", e.pos);
  } else {
    out.push_back(ground_atom(e));
  }
}

}  // namespace

DomainAst parse_domain(std::string_view text) {
  SExpr doc = Reader(text).read_document();
  return DomainParser().parse(doc);
}

ProblemAst parse_problem(std::string_view text) {
  SExpr doc = Reader(text).read_document();
  if (!doc.head_is("define")) fail("expected (define ...)", doc.pos);
  if (doc.items.size() < 2 || !doc.items[1].head_is("problem") || doc.items[1].items.size() != 2) {
    fail("expected (problem <name>)", doc.items.size() > 1 ? doc.items[1].pos : doc.pos);
  }
  ProblemAst ast;
  ast.name = expect_atom(doc.items[1].items[1], "problem name");
  bool has_goal = false;
  std::size_t ignored_numeric = 0;
  std::vector<std::string> requirements;
  for (std::size_t i = 2; i < doc.items.size(); ++i) {
    const SExpr& section = doc.items[i];
    if (!section.is_list || section.items.empty() || section.items[0].is_list) {
      fail("expected a problem section", section.pos);
    }
    const std::string& key = section.items[0].atom;
    if (key == ":domain") {
      if (section.items.size() != 2) fail("expected (:domain <name>)", section.pos);
      ast.domain = expect_atom(section.items[1], "domain name");
    } else if (key == ":requirements") {
      check_requirements(section, requirements);
    } else if (key == ":objects") {
      auto objects = parse_typed_list(section.items, 1);
      ast.objects.insert(ast.objects.end(), objects.begin(), objects.end());
    } else if (key == ":init") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const SExpr& fact = section.items[k];
        if (fact.head_is("=")) {
          ++ignored_numeric;
          continue;
        }
        if (fact.head_is("not")) fail("negative literals are not allowed in :init", fact.pos);
        ast.init.push_back(ground_atom(fact));
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) fail("expected (:goal <formula>)", section.pos);
      parse_goal(section.items[1], ast.goal);
      has_goal = true;
    } else if (key == ":metric") {
      ast.warnings.push_back("ignored :metric; action costs do not affect explanations");
    } else if (key == ":constraints") {
      unsupported(":constraints", section.pos);
    } else {
      fail("unknown problem section '" + key + "'", section.pos);
    }
  }
  if (!has_goal) fail("problem has no :goal", doc.pos);
  if (ast.goal.empty()) ast.warnings.push_back("goal is an empty conjunction");
  if (ignored_numeric > 0) {
    ast.warnings.push_back("ignored " + std::to_string(ignored_numeric) +
                           " numeric initial value(s)");
  }
  return ast;
}

}  // namespace foilex::pddl
