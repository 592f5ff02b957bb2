#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "flowcalc/flow.hpp"
#include "flowcalc/simplicial_set.hpp"

namespace flowcalc {

/// Backtracking search for an isomorphism of loopless flows: a state
/// bijection followed by simplex assignments level by level, where
/// degenerate and composite simplices are forced and only the free ones
/// branch. Throws NotLoopless on flows with loops.
std::optional<FlowMorphism> find_isomorphism(const Flow& x, const Flow& y);

/// Every morphism X -> Y (up to `limit`), in search order.
std::vector<FlowMorphism> enumerate_morphisms(const Flow& x, const Flow& y,
                                              std::size_t limit = std::numeric_limits<std::size_t>::max());

std::optional<SimplicialMap> find_isomorphism(const SimplicialSet& a, const SimplicialSet& b);

inline bool isomorphic(const Flow& x, const Flow& y) { return find_isomorphism(x, y).has_value(); }
inline bool isomorphic(const SimplicialSet& a, const SimplicialSet& b) {
  return find_isomorphism(a, b).has_value();
}

}  // namespace flowcalc
