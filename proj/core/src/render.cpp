#include "foilex/render.hpp"

namespace foilex {

std::string format_update(const ModelUpdate& update) {
  if (update.kind == UpdateKind::kInitialState || update.kind == UpdateKind::kGoal) {
    return update.fluent + "-" + to_string(update.kind);
  }
  return update.action + "-" + to_string(update.kind) + "-" + update.fluent;
}

std::vector<ModelUpdateMessage> render_units(const LatticeSpec& lattice, UnitSet units) {
  std::vector<ModelUpdateMessage> out;
  for (std::size_t i : units.indices()) {
    const AbstractionUnit& unit = lattice.unit(i);
    for (auto& update : unit_updates(lattice.base(), unit)) {
      std::string text = format_update(update);
      out.push_back({unit.id, std::move(update), std::move(text)});
    }
  }
  return out;
}

std::vector<ModelUpdateMessage> render_explanation(const Explanation& explanation,
                                                   const LatticeSpec& lattice) {
  return render_units(lattice, explanation.units);
}

}  // namespace foilex
