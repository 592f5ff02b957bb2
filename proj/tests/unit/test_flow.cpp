#include <random>

#include "doctest.h"
#include "flowcalc/error.hpp"
#include "flowcalc/flow.hpp"
#include "generators.hpp"

using namespace flowcalc;

namespace {

// Flow with states a < b < c, P(a,b) = P(b,c) = P(a,c) = two points and the
// composition picked by `table` (x * y -> table[x * 2 + y]).
Flow two_point_triangle(std::vector<SimplexId> table, int cap = 2) {
  Flow x({"a", "b", "c"}, cap);
  x.set_path(0, 1, discrete(2, cap));
  x.set_path(1, 2, discrete(2, cap));
  x.set_path(0, 2, discrete(2, cap));
  Flow::CompositionTable t(cap + 1, table);
  x.set_composition(0, 1, 2, t);
  return x;
}

}  // namespace

TEST_CASE("poset flows are well formed") {
  std::mt19937 rng(1);
  for (int t = 0; t < 30; ++t) {
    const Poset p = testing::random_bounded_poset(rng, 7);
    const Flow f = poset_flow(p, 2);
    CHECK(f.violations().empty());
    for (Element a = 0; a < p.size(); ++a) {
      for (Element b = 0; b < p.size(); ++b) CHECK(f.has_paths(a, b) == p.less(a, b));
    }
    CHECK(is_full_directed_ball(f).ok());
  }
}

TEST_CASE("glob and the directed segment") {
  const Flow g = glob(circle(2));
  CHECK(g.violations().empty());
  CHECK(g.state_count() == 2);
  CHECK(g.path(0, 1) == circle(2));
  CHECK_FALSE(g.has_paths(1, 0));
  const Flow seg = directed_segment(2);
  CHECK(seg.path(0, 1).size(2) == 1);
  // The circle glob has non-contractible paths.
  const BallReport r = is_full_directed_ball(g);
  CHECK_FALSE(r.contractible_paths);
  CHECK(is_full_directed_ball(seg).ok());
}

TEST_CASE("composition tables are validated") {
  const Flow good = two_point_triangle({0, 1, 1, 0});
  CHECK(good.violations().empty());
  CHECK(good.compose(0, 1, 2, 0, 1, 0) == 1);
  CHECK(good.compose_chain({0, 1, 2}, 0, {1, 1}) == 0);
  // Out of range target.
  const Flow bad = two_point_triangle({0, 1, 2, 0});
  CHECK_FALSE(bad.violations().empty());
  Flow missing({"a", "b", "c"}, 1);
  missing.set_path(0, 1, point(1));
  missing.set_path(1, 2, point(1));
  missing.set_path(0, 2, point(1));
  CHECK_FALSE(missing.violations().empty());
  CHECK_THROWS_AS(validate_flow(missing), Error);
  CHECK_THROWS_AS(missing.set_path(0, 1, point(2)), Error);
}

TEST_CASE("associativity failures are caught") {
  // A chain a < b < c < d with two points on P(a,d); the two bracketings pick
  // different points.
  const int cap = 1;
  Flow x({"a", "b", "c", "d"}, cap);
  for (StateId i = 0; i < 4; ++i) {
    for (StateId j = i + 1; j < 4; ++j) x.set_path(i, j, i == 0 && j == 3 ? discrete(2, cap) : point(cap));
  }
  auto constant = [&](SimplexId v) { return Flow::CompositionTable(cap + 1, std::vector<SimplexId>{v}); };
  x.set_composition(0, 1, 2, constant(0));
  x.set_composition(1, 2, 3, constant(0));
  x.set_composition(0, 2, 3, constant(0));
  x.set_composition(0, 1, 3, constant(1));
  const auto v = x.violations();
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().find("associativity") != std::string::npos);
  x.set_composition(0, 1, 3, constant(0));
  CHECK(x.violations().empty());
}

TEST_CASE("morphisms") {
  const Flow f = poset_flow(testing::two_branch(), 2);
  const FlowMorphism id = identity_morphism(f);
  CHECK(is_morphism(id, f, f));
  CHECK(compose(id, id, f) == id);
  const Flow t = terminal_flow(2);
  CHECK(t.violations().empty());
  const FlowMorphism bang = to_terminal(f, t);
  CHECK(is_morphism(bang, f, t));
  // Swapping A and C is not a morphism: B sits above A only.
  FlowMorphism swap = id;
  std::swap(swap.states[1], swap.states[3]);
  std::string why;
  CHECK_FALSE(is_morphism(swap, f, f, &why));
  CHECK_FALSE(why.empty());
}

TEST_CASE("coproduct keeps names unique") {
  const Flow s = directed_segment(2);
  const Flow c = coproduct({s, s}, 2);
  CHECK(c.violations().empty());
  CHECK(c.state_count() == 4);
  CHECK(c.state_name(2) == "0'");
  CHECK(c.has_paths(2, 3));
  CHECK_FALSE(c.has_paths(0, 3));
  const FlowReport r = validate_flow(c);
  CHECK(r.loopless);
  CHECK(r.initial_states.size() == 2);
  CHECK_FALSE(is_full_directed_ball(c).unique_ends);
}

TEST_CASE("restrictions") {
  const Flow f = poset_flow(testing::two_branch(), 2);
  const Restriction r = restriction(f, std::vector<std::string>{"0", "A", "B"});
  CHECK(r.flow.violations().empty());
  CHECK(r.flow.state_count() == 3);
  CHECK(r.flow.has_paths(0, 2));
  CHECK(is_morphism(r.inclusion, r.flow, f));
  CHECK_THROWS_AS(restriction(f, std::vector<std::string>{"Z"}), Error);
  CHECK_THROWS_AS(restriction(f, std::vector<StateId>{0, 0}), Error);
}

TEST_CASE("state order of a loopless flow") {
  const Flow f = poset_flow(testing::two_branch(), 2);
  const Poset p = state_order(f);
  CHECK(p.strict_pairs().size() == 8);
  const FlowReport r = validate_flow(f);
  REQUIRE(r.state_order.has_value());
  CHECK(r.initial_states == std::vector<StateId>{0});
  CHECK(r.final_states == std::vector<StateId>{4});
  const Flow loop = terminal_flow(2);
  CHECK_FALSE(validate_flow(loop).loopless);
}

TEST_CASE("pullback along the terminal map is a product") {
  const Flow a = directed_segment(2);
  const Flow b = glob(discrete(2, 2));
  const Flow t = terminal_flow(2);
  const Pullback p = pullback(a, to_terminal(a, t), b, to_terminal(b, t), t);
  CHECK(p.flow.violations().empty());
  CHECK(p.flow.state_count() == 4);
  CHECK(is_morphism(p.to_x, p.flow, a));
  CHECK(is_morphism(p.to_z, p.flow, b));
  // P((0,0),(1,1)) = P_a(0,1) x P_b(0,1) has two vertices.
  std::size_t found = 0;
  for (StateId s = 0; s < 4; ++s) {
    for (StateId u = 0; u < 4; ++u) {
      if (p.flow.has_paths(s, u)) {
        ++found;
        CHECK(p.flow.path(s, u).size(0) == 2);
      }
    }
  }
  CHECK(found == 1);
}

TEST_CASE("random flows satisfy every flow axiom") {
  std::mt19937 rng(23);
  testing::RandomFlowOptions options;
  for (int t = 0; t < 40; ++t) {
    const Flow x = testing::random_flow(rng, options);
    CHECK(x.violations().empty());
    CHECK(validate_flow(x).loopless);
  }
}
