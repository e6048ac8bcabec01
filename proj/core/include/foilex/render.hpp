#pragma once

#include <string>
#include <vector>

#include "foilex/abstraction.hpp"
#include "foilex/explain.hpp"
#include "foilex/lattice.hpp"

namespace foilex {

struct ModelUpdateMessage {
  std::string unit;
  ModelUpdate update;
  std::string text;
};

/// "<action>-<kind>-<fluent>" for action-scoped updates, "<fluent>-<kind>" otherwise.
std::string format_update(const ModelUpdate& update);

/// Messages for the units of `units`, by unit id and then in unit_updates order.
/// One message per counted update, so the count equals the set's cost.
std::vector<ModelUpdateMessage> render_units(const LatticeSpec& lattice, UnitSet units);

std::vector<ModelUpdateMessage> render_explanation(const Explanation& explanation,
                                                   const LatticeSpec& lattice);

}  // namespace foilex
