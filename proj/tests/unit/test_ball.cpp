#include <random>

#include "doctest.h"
#include "flowcalc/ball.hpp"
#include "flowcalc/error.hpp"
#include "flowcalc/isomorphism.hpp"
#include "generators.hpp"

using namespace flowcalc;

TEST_CASE("joining segments") {
  const Flow seg = directed_segment(2);
  const Colimit j = join(seg, seg);
  CHECK(j.flow.state_count() == 3);
  CHECK(isomorphic(j.flow, poset_flow(testing::chain_poset(2), 2)));
  CHECK(is_morphism(j.injections[0], seg, j.flow));
  CHECK(is_morphism(j.injections[1], seg, j.flow));
  const Colimit three = join_all({seg, seg, seg});
  CHECK(isomorphic(three.flow, poset_flow(testing::chain_poset(3), 2)));
  CHECK(three.injections.size() == 5);
}

TEST_CASE("joins need unique ends") {
  const Flow two = coproduct({directed_segment(2), directed_segment(2)}, 2);
  try {
    join(two, directed_segment(2));
    FAIL("expected NotJoinable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotJoinable);
  }
}

TEST_CASE("ball diagram of the two-branch poset") {
  const Flow f = poset_flow(testing::two_branch(), 2);
  const BallDiagram g = ball_diagram(f);
  CHECK(g.objects.size() == 5);
  CHECK(g.arrows.size() == 5);
  CHECK(g.violations.empty());
  CHECK(g.relations_checked == 1);
  // G(bottom, top) is the ball itself.
  CHECK(isomorphic(g.objects[g.category.terminal].flow, f));
  for (std::size_t o = 0; o < g.objects.size(); ++o) {
    CHECK(g.objects[o].flow.violations().empty());
  }
}

TEST_CASE("ball diagrams are functorial on random posets") {
  std::mt19937 rng(31);
  for (int t = 0; t < 15; ++t) {
    const Poset p = testing::random_bounded_poset(rng, 6);
    const BallDiagram g = ball_diagram(poset_flow(p, 2));
    CHECK(g.violations.empty());
  }
}

TEST_CASE("non-balls are refused") {
  try {
    ball_diagram(glob(circle(2)));
    FAIL("expected NotABall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotABall);
  }
}

TEST_CASE("latching object of a three-chain") {
  const Poset p = testing::chain_poset(2);
  const Flow f = poset_flow(p, 2);
  const LatchingObject l = latching_object(ball_diagram(f));
  CHECK(l.objects.size() == 1);
  CHECK(l.components == 1);
  CHECK(isomorphic(l.colimit.flow, f));
  CHECK(is_morphism(l.to_ball, l.colimit.flow, f));
}

TEST_CASE("latching object of the two-branch poset") {
  const Flow f = poset_flow(testing::two_branch(), 2);
  const BallDiagram g = ball_diagram(f);
  const LatchingObject l = latching_object(g);
  CHECK(l.objects.size() == 4);
  CHECK(l.components == 2);
  CHECK(l.colimit.flow.state_count() == 7);
  CHECK(is_morphism(l.to_ball, l.colimit.flow, g.objects[g.category.terminal].flow));
}

TEST_CASE("join probe") {
  const Poset p = testing::two_branch();
  const JoinProbe at_a = join_probe(p, 0, 1, 4, 2);
  CHECK(at_a.join_states == 4);
  CHECK(at_a.interval_states == 5);
  CHECK(at_a.incomparable == std::vector<Element>{3});
  CHECK_FALSE(at_a.isomorphic);
  const JoinProbe inside = join_probe(p, 0, 1, 2, 2);
  CHECK(inside.incomparable.empty());
  CHECK(inside.isomorphic);
  CHECK_THROWS_AS(join_probe(p, 0, 3, 2, 2), Error);
}

TEST_CASE("latching comparison records witnesses") {
  const LatchingComparison c = compare_latching(testing::two_branch(), 2);
  CHECK(c.latching_states == 7);
  CHECK(c.poset_states == 5);
  CHECK(c.components == 2);
  CHECK_FALSE(c.isomorphic);
  CHECK_FALSE(c.map_injective_on_states);
  CHECK(c.map_surjective_on_states);
  CHECK(c.witnesses.size() >= 3);
  const LatchingComparison chain = compare_latching(testing::chain_poset(2), 2);
  CHECK(chain.isomorphic);
  CHECK(chain.map_injective_on_states);
}
