#pragma once

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "foilex/model.hpp"

namespace foilex::testing {

/// Builds small ground models from nullary fluent names.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::vector<std::string> fluents) {
    std::vector<Fluent> table;
    for (auto& f : fluents) table.push_back({std::move(f), {}});
    table_ = std::make_shared<const FluentTable>(std::move(table));
  }

  FluentList ids(std::initializer_list<const char*> names) const {
    FluentList out;
    for (const char* n : names) out.push_back(*table_->find({n, {}}));
    normalize(out);
    return out;
  }

  EffectClause clause(std::initializer_list<const char*> condition,
                      std::initializer_list<const char*> add, std::initializer_list<const char*> del,
                      bool nd = false) const {
    return {ids(condition), ids(add), ids(del), nd};
  }

  ModelBuilder& action(std::string name, std::initializer_list<const char*> prec,
                       std::vector<EffectClause> effects, std::string schema = {}) {
    GroundAction a;
    a.schema = schema.empty() ? name : schema;
    a.name = std::move(name);
    a.prec = ids(prec);
    a.effects = std::move(effects);
    actions_.push_back(std::move(a));
    return *this;
  }

  std::shared_ptr<const PlanningModel> build(std::initializer_list<const char*> init,
                                             std::initializer_list<const char*> goal) const {
    FluentList all(table_->size());
    for (FluentId i = 0; i < table_->size(); ++i) all[i] = i;
    return std::make_shared<const PlanningModel>(table_, all, actions_, ids(init), ids(goal));
  }

 private:
  std::shared_ptr<const FluentTable> table_;
  std::vector<GroundAction> actions_;
};

}  // namespace foilex::testing
