#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowcalc/poset.hpp"
#include "flowcalc/simplicial_set.hpp"

namespace flowcalc {

using StateId = std::size_t;

/// Finite flow: a state set, a simplicial path space for every ordered pair of
/// states (possibly empty), and a levelwise associative composition
/// P(a,b) x P(b,c) -> P(a,c). Sources and targets are implicit in the (a,b)
/// indexing.
class Flow {
 public:
  Flow() : Flow({}, kDefaultCap) {}
  explicit Flow(std::vector<std::string> states, int cap = kDefaultCap);

  int cap() const { return cap_; }
  std::size_t state_count() const { return states_.size(); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(StateId s) const { return states_.at(s); }
  std::optional<StateId> find_state(const std::string& name) const;

  const SimplicialSet& path(StateId a, StateId b) const { return paths_[a * state_count() + b]; }
  bool has_paths(StateId a, StateId b) const { return !path(a, b).empty(); }
  void set_path(StateId a, StateId b, SimplicialSet space);

  /// Composition table for the triple (a, b, c): entry [level][x * |P(b,c)_level| + y].
  using CompositionTable = std::vector<std::vector<SimplexId>>;
  void set_composition(StateId a, StateId b, StateId c, CompositionTable table);
  const CompositionTable* composition(StateId a, StateId b, StateId c) const;
  SimplexId compose(StateId a, StateId b, StateId c, int level, SimplexId x, SimplexId y) const;

  /// Composite of a chain of path simplices at one level; `states` has one more
  /// entry than `simplices`.
  SimplexId compose_chain(const std::vector<StateId>& states, int level,
                          const std::vector<SimplexId>& simplices) const;

  std::size_t total_simplices() const;

  /// Structural problems: malformed path spaces, missing or non-simplicial
  /// composition, associativity failures. Empty for a well-formed flow.
  std::vector<std::string> violations() const;

 private:
  std::size_t key(StateId a, StateId b, StateId c) const {
    return (a * state_count() + b) * state_count() + c;
  }

  int cap_;
  std::vector<std::string> states_;
  std::vector<SimplicialSet> paths_;
  std::unordered_map<std::size_t, CompositionTable> compose_;
};

/// State function plus a simplicial map on every nonempty path space of the
/// source, indexed a * |states| + b.
struct FlowMorphism {
  std::vector<StateId> states;
  std::vector<SimplicialMap> paths;

  const SimplicialMap& on(const Flow& source, StateId a, StateId b) const {
    return paths[a * source.state_count() + b];
  }
  bool operator==(const FlowMorphism&) const = default;
};

/// Checks endpoints, simpliciality and f(x * y) = f(x) * f(y). The optional
/// string receives the first failure.
bool is_morphism(const FlowMorphism& f, const Flow& source, const Flow& target,
                 std::string* why = nullptr);
FlowMorphism identity_morphism(const Flow& x);
FlowMorphism compose(const FlowMorphism& second, const FlowMorphism& first, const Flow& first_source);

/// Glob(Z): states 0 and 1, P(0,1) = Z, nothing composable.
Flow glob(const SimplicialSet& z);
/// The directed segment Glob(point).
Flow directed_segment(int cap = kDefaultCap);
/// Flow with the given states and no execution paths.
Flow discrete_flow(std::vector<std::string> states, int cap = kDefaultCap);
/// One state with a single idempotent loop; every flow maps to it uniquely.
Flow terminal_flow(int cap = kDefaultCap);
/// Coproduct; states of summand k follow those of summand k - 1.
Flow coproduct(const std::vector<Flow>& parts, int cap = kDefaultCap);

/// F(P): one path u(a,b) whenever a < b, with u(a,b) * u(b,c) = u(a,c).
Flow poset_flow(const Poset& poset, int cap = kDefaultCap);

struct Restriction {
  Flow flow;
  FlowMorphism inclusion;
  std::vector<StateId> states;  // restricted state k is states[k] in the source
};
/// X restricted to the subset A of states (listed in the order given).
/// Throws UnknownState when A names a state outside X.
Restriction restriction(const Flow& x, const std::vector<StateId>& subset);
Restriction restriction(const Flow& x, const std::vector<std::string>& subset);

struct FlowReport {
  bool loopless = false;
  std::optional<Poset> state_order;  // present when loopless
  std::vector<StateId> initial_states;
  std::vector<StateId> final_states;
};
/// Throws MalformedFlow when the flow has structural violations.
FlowReport validate_flow(const Flow& x);

/// Strict reachability order of a loopless flow (a < b iff P(a,b) nonempty).
Poset state_order(const Flow& x);

struct BallReport {
  bool finite = true;
  bool unique_ends = false;
  bool all_between = false;
  bool loopless = false;
  bool contractible_paths = false;
  std::optional<StateId> bottom;
  std::optional<StateId> top;
  std::vector<std::string> failures;

  bool ok() const { return finite && unique_ends && all_between && loopless && contractible_paths; }
};
/// Checks the five full-directed-ball conditions; path spaces are tested with
/// the homology surrogate (is_homology_contractible).
BallReport is_full_directed_ball(const Flow& x);

struct Pullback {
  Flow flow;
  FlowMorphism to_x;
  FlowMorphism to_z;
  std::vector<std::pair<StateId, StateId>> states;
};
/// Levelwise pullback of f : X -> W and g : Z -> W.
Pullback pullback(const Flow& x, const FlowMorphism& f, const Flow& z, const FlowMorphism& g,
                  const Flow& w);

/// The unique morphism into terminal_flow.
FlowMorphism to_terminal(const Flow& x, const Flow& terminal);

}  // namespace flowcalc
