#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowcalc/flow.hpp"
#include "flowcalc/homology.hpp"
#include "flowcalc/presentation.hpp"

namespace flowcalc {

/// Minus: paths leaving a state, x ~ x * y. Plus: paths entering, y ~ x * y.
enum class Direction { Minus, Plus };

std::string_view to_string(Direction d);

struct StateBranch {
  StateId state = 0;
  SimplicialSet space;
  /// Degrees 0 .. cap - 1; empty when the space is.
  std::vector<HomologyGroup> homology;
  /// classes[other][level][simplex]: class of a path simplex of P(state, other)
  /// (minus) or P(other, state) (plus); empty where that path space is.
  std::vector<std::vector<std::vector<SimplexId>>> classes;

  bool empty() const { return space.empty(); }
  bool contractible() const;
};

struct BranchReport {
  Direction direction = Direction::Minus;
  std::vector<StateBranch> states;
};

BranchReport branching_space(const Flow& x, Direction direction);

/// Disjoint union of the per-state spaces.
SimplicialSet total_branching_space(const BranchReport& report);

/// Homology per state; nullopt marks an empty space.
using BranchProfile = std::vector<std::optional<std::vector<HomologyGroup>>>;
BranchProfile branching_profile(const Flow& x, Direction direction);

/// For a full directed ball D: the branching space of F(D^0) at the bottom
/// has one class, and the branching space of D at the bottom is
/// homology-contractible. Throws NotABall.
struct BottomBranchReport {
  std::size_t poset_classes = 0;
  bool single_class = false;
  bool contractible = false;
  std::vector<HomologyGroup> homology;
  bool passed() const { return single_class && contractible; }
};
BottomBranchReport bottom_branch_check(const Flow& d);

/// Replaces the level-0 path u from a to b by the ball D: the pushout of
/// D <- I -> X where I picks u in X and vertex 0 of P(bottom, top) in D.
struct Subdivision {
  Flow flow;
  FlowMorphism from_x;
  FlowMorphism from_ball;
};
Subdivision t_subdivide(const Flow& x, StateId a, StateId b, SimplexId u, const Flow& ball,
                        std::size_t budget = kDefaultBudget);

struct StateComparison {
  Direction direction = Direction::Minus;
  StateId x_state = 0;
  StateId y_state = 0;
  std::optional<std::vector<HomologyGroup>> before;
  std::optional<std::vector<HomologyGroup>> after;
  bool ok = false;
};

struct NewStateCheck {
  Direction direction = Direction::Minus;
  StateId y_state = 0;
  std::optional<std::vector<HomologyGroup>> profile;
  bool ok = false;
};

struct InvarianceReport {
  std::vector<StateComparison> comparisons;
  std::vector<NewStateCheck> new_states;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Per-state homology of branching and merging spaces is preserved along f,
/// and states outside the image have empty or contractible spaces. Throws
/// MalformedSubdivision when f is not injective on states.
InvarianceReport check_invariance(const Flow& x, const Flow& y, const FlowMorphism& f);

}  // namespace flowcalc
