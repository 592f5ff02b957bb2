#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowcalc/flow.hpp"
#include "flowcalc/simplicial_set.hpp"

namespace flowcalc {

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Generator simplex `simplex` of block `block`, at the level of its word.
struct Letter {
  std::size_t block = 0;
  SimplexId simplex = 0;
  auto operator<=>(const Letter&) const = default;
};

struct Word {
  int level = 0;
  std::vector<Letter> letters;
  bool operator==(const Word&) const = default;
};

/// A simplicial set of generators running from `source` to `target`.
struct GeneratorBlock {
  StateId source = 0;
  StateId target = 0;
  SimplicialSet space;
  std::string label;
};

/// Flow by generators and relations. Words are chains of generator simplices
/// at one level; faces and degeneracies act letterwise.
struct FlowPresentation {
  std::string name;
  std::vector<std::string> states;
  int cap = kDefaultCap;
  std::vector<GeneratorBlock> generators;
  std::vector<std::pair<Word, Word>> relations;

  std::size_t add_block(StateId source, StateId target, SimplicialSet space, std::string label = {});
  StateId source(const Word& w) const { return generators.at(w.letters.front().block).source; }
  StateId target(const Word& w) const { return generators.at(w.letters.back().block).target; }
};

/// Result of saturation: the presented flow plus the word-to-class lookup.
class Saturation {
 public:
  Flow flow;
  /// embedding[block][level][simplex]: class of the one-letter word.
  std::vector<std::vector<std::vector<SimplexId>>> embedding;

  /// Class of a word inside path(source, target), or nullopt when the word is
  /// not a valid chain of the presentation.
  std::optional<SimplexId> class_of(const Word& w) const;
  /// First enumerated word of a class.
  const Word& representative(StateId a, StateId b, int level, SimplexId c) const;
  /// Words enumerated per level.
  const std::vector<std::size_t>& word_counts() const;

  struct Data;
  std::shared_ptr<const Data> data;
};

/// Congruence closure over the finite word universe. Throws NotLoopless when
/// the generators do not induce a strict order, BudgetExceeded when a level
/// has more than `budget` words.
Saturation saturate(const FlowPresentation& pres, std::size_t budget = kDefaultBudget);

/// A finite diagram of flows; arrows are morphisms between nodes.
struct FlowDiagram {
  struct Arrow {
    std::size_t source = 0;
    std::size_t target = 0;
    FlowMorphism map;
  };
  std::vector<Flow> nodes;
  std::vector<Arrow> arrows;

  std::size_t add_node(Flow x);
  void add_arrow(std::size_t source, std::size_t target, FlowMorphism map);
};

struct Colimit {
  Flow flow;
  std::vector<FlowMorphism> injections;  // one per node
  Saturation saturation;

  /// Per generator block: originating node, node states, and the node simplex
  /// behind each block simplex ([level][simplex]).
  struct Origin {
    std::size_t node = 0;
    StateId source = 0;
    StateId target = 0;
    std::vector<std::vector<SimplexId>> simplex;
  };
  std::vector<Origin> origins;
  std::vector<std::pair<std::size_t, StateId>> state_origin;  // a node state per colimit state
};

/// States are glued by union-find; paths are presented by the indecomposable
/// generators of each node with composition and arrow relations, then
/// saturated. Names come from the first node holding the state.
Colimit colimit(const FlowDiagram& diagram, std::size_t budget = kDefaultBudget);

/// The morphism colim -> target induced by a cocone (one morphism per node).
FlowMorphism mediate(const Colimit& c, const Flow& target, const std::vector<FlowMorphism>& cocone);

/// Pushout of B <- A -> C. Injections are those of B (index 0) and C (index 1).
Colimit pushout(const Flow& a, const Flow& b, const FlowMorphism& f, const Flow& c,
                const FlowMorphism& g, std::size_t budget = kDefaultBudget);

struct Tensor {
  Flow flow;
  /// embedding[a * |states| + b][level][u * |P(a,b)_level| + x] = class of (u, x).
  std::vector<std::vector<std::vector<SimplexId>>> embedding;

  /// x_sizes[a * |states| + b][level] = |P(a,b)_level| in X.
  std::vector<std::vector<std::size_t>> x_sizes;

  SimplexId embed(StateId a, StateId b, int level, SimplexId u, SimplexId x) const {
    const std::size_t pair = a * flow.state_count() + b;
    return embedding[pair][level][u * x_sizes[pair][level] + x];
  }
};

/// U tensor X: generators (u, x) for same-level u in U and x in X, with
/// (u, x)(u, y) ~ (u, x * y). States are those of X.
Tensor tensor(const SimplicialSet& u, const Flow& x, std::size_t budget = kDefaultBudget);

struct MappingCylinder {
  Flow flow;
  FlowMorphism from_target;  // X -> Mi
  FlowMorphism end_zero;     // A -> Mi, a -> 0 (x) a, equal to from_target . i
  FlowMorphism end_one;      // A -> Mi, a -> 1 (x) a
};
/// Pushout of (Delta^1 (x) A <- A -> X) along a -> 0 (x) a and i.
MappingCylinder mapping_cylinder(const Flow& a, const FlowMorphism& i, const Flow& x,
                                 std::size_t budget = kDefaultBudget);

struct SequentialColimit {
  Flow flow;
  std::vector<FlowMorphism> injections;
};
/// Levelwise colimit of Z_0 -> Z_1 -> ... -> Z_k. Throws NotAnInclusion if
/// some link is not injective on states or on a path level.
SequentialColimit sequential_colimit(const std::vector<Flow>& chain,
                                     const std::vector<FlowMorphism>& links);

/// Presentation of a loopless flow by its indecomposable simplices, with the
/// relation x . y = x * y for every composable pair.
FlowPresentation present(const Flow& x);

}  // namespace flowcalc
