#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flowcalc/flow.hpp"
#include "flowcalc/poset.hpp"
#include "flowcalc/presentation.hpp"

namespace flowcalc {

/// D * D': the final state of D glued to the initial state of D'. The
/// injections are those of D (0) and D' (1). Throws NotJoinable unless D has
/// exactly one final state and D' exactly one initial state.
Colimit join(const Flow& d, const Flow& e, std::size_t budget = kDefaultBudget);

/// Iterated join in one colimit. Injections: one per segment, then one per
/// glued point.
Colimit join_all(const std::vector<Flow>& segments, std::size_t budget = kDefaultBudget);

/// Inclusion between two restrictions of the same flow (small states must be
/// among the big ones).
FlowMorphism restriction_inclusion(const Restriction& small, const Restriction& big);

/// The functor on chains of a full directed ball: each chain goes to the join
/// of the restrictions to its consecutive intervals, each interior deletion to
/// the morphism induced by composition.
struct BallDiagram {
  Flow ball;
  Poset order;
  ExtCategory category;
  std::vector<Colimit> objects;      // per chain
  std::vector<FlowMorphism> arrows;  // per generating arrow
  std::size_t relations_checked = 0;
  std::vector<std::string> violations;
};
/// Throws NotABall when D fails the ball check.
BallDiagram ball_diagram(const Flow& d, std::size_t budget = kDefaultBudget);

/// Colimit of the diagram restricted to every chain except (bottom, top).
struct LatchingObject {
  Colimit colimit;
  std::vector<std::size_t> objects;  // diagram node k is chain objects[k]
  std::size_t components = 0;        // of the punctured index graph
  FlowMorphism to_ball;              // canonical map into G(bottom, top)
};
LatchingObject latching_object(const BallDiagram& g, std::size_t budget = kDefaultBudget);

/// F(P) restricted to [a, b] joined with F(P) restricted to [b, c], against
/// F(P) restricted to [a, c].
struct JoinProbe {
  Element a = 0, b = 0, c = 0;
  std::size_t join_states = 0;
  std::size_t interval_states = 0;
  std::vector<Element> incomparable;  // elements of [a, c] not comparable to b
  bool isomorphic = false;
};
JoinProbe join_probe(const Poset& p, Element a, Element b, Element c, int cap = kDefaultCap);

struct LatchingComparison {
  std::size_t latching_states = 0;
  std::size_t poset_states = 0;
  std::size_t components = 0;
  bool isomorphic = false;
  bool map_injective_on_states = false;
  bool map_surjective_on_states = false;
  std::vector<std::string> witnesses;
};
LatchingComparison compare_latching(const Poset& p, int cap = kDefaultCap,
                                    std::size_t budget = kDefaultBudget);

}  // namespace flowcalc
