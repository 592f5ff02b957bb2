#include "flowcalc/ball.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "flowcalc/error.hpp"
#include "flowcalc/isomorphism.hpp"
#include "union_find.hpp"

namespace flowcalc {

namespace {

FlowMorphism point_into(StateId s) {
  FlowMorphism f;
  f.states = {s};
  f.paths.resize(1);
  return f;
}

StateId unique_end(const Flow& x, bool final_state, const std::string& role) {
  const FlowReport r = validate_flow(x);
  const auto& ends = final_state ? r.final_states : r.initial_states;
  if (ends.size() != 1) {
    fail(Errc::NotJoinable, role + " has " + std::to_string(ends.size()) +
                                (final_state ? " final" : " initial") + " states, expected one");
  }
  return ends.front();
}

}  // namespace

Colimit join(const Flow& d, const Flow& e, std::size_t budget) { return join_all({d, e}, budget); }

Colimit join_all(const std::vector<Flow>& segments, std::size_t budget) {
  FlowDiagram diagram;
  for (const auto& s : segments) diagram.add_node(s);
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    const StateId last = unique_end(segments[k], true, "segment " + std::to_string(k));
    const StateId first = unique_end(segments[k + 1], false, "segment " + std::to_string(k + 1));
    const std::size_t point =
        diagram.add_node(discrete_flow({segments[k].state_name(last)}, segments[k].cap()));
    diagram.add_arrow(point, k, point_into(last));
    diagram.add_arrow(point, k + 1, point_into(first));
  }
  return colimit(diagram, budget);
}

FlowMorphism restriction_inclusion(const Restriction& small, const Restriction& big) {
  FlowMorphism f;
  for (StateId s : small.states) {
    const auto it = std::find(big.states.begin(), big.states.end(), s);
    if (it == big.states.end()) fail(Errc::UnknownState, "restriction is not contained in the other");
    f.states.push_back(static_cast<StateId>(it - big.states.begin()));
  }
  const std::size_t n = small.states.size();
  f.paths.resize(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (small.flow.has_paths(a, b)) f.paths[a * n + b] = identity_map(small.flow.path(a, b));
    }
  }
  return f;
}

BallDiagram ball_diagram(const Flow& d, std::size_t budget) {
  const BallReport report = is_full_directed_ball(d);
  if (!report.ok()) {
    std::string why;
    for (const auto& f : report.failures) why += (why.empty() ? "" : "; ") + f;
    fail(Errc::NotABall, why);
  }
  BallDiagram g;
  g.ball = d;
  g.order = state_order(d);
  g.category = ext_category(g.order);
  const auto& cat = g.category;

  std::vector<std::vector<Restriction>> segments(cat.objects.size());
  for (std::size_t o = 0; o < cat.objects.size(); ++o) {
    const auto& chain = cat.objects[o];
    std::vector<Flow> flows;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      segments[o].push_back(restriction(d, g.order.interval(chain[k], chain[k + 1])));
      flows.push_back(segments[o].back().flow);
    }
    g.objects.push_back(join_all(flows, budget));
  }

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> generator_of;
  for (std::size_t a = 0; a < cat.generators.size(); ++a) {
    const ExtArrow& arrow = cat.generators[a];
    generator_of[{arrow.source, arrow.index}] = a;
    const auto& chain = cat.objects[arrow.source];
    const std::size_t p = chain.size() - 1;
    const std::size_t i = arrow.index;
    const Colimit& target = g.objects[arrow.target];
    std::vector<FlowMorphism> cocone;
    for (std::size_t k = 0; k < p; ++k) {
      if (k + 1 < i) {
        cocone.push_back(target.injections[k]);
      } else if (k + 1 == i || k == i) {
        cocone.push_back(compose(target.injections[i - 1],
                                 restriction_inclusion(segments[arrow.source][k],
                                                       segments[arrow.target][i - 1]),
                                 segments[arrow.source][k].flow));
      } else {
        cocone.push_back(target.injections[k - 1]);
      }
    }
    for (std::size_t k = 0; k + 1 < p; ++k) {
      const auto& seg = segments[arrow.source][k].states;
      const auto last = static_cast<StateId>(
          std::find(seg.begin(), seg.end(), chain[k + 1]) - seg.begin());
      cocone.push_back(point_into(cocone[k].states[last]));
    }
    FlowMorphism m = mediate(g.objects[arrow.source], target.flow, cocone);
    std::string why;
    if (!is_morphism(m, g.objects[arrow.source].flow, target.flow, &why)) {
      g.violations.push_back("arrow " + std::to_string(a) + " is not a morphism: " + why);
    }
    g.arrows.push_back(std::move(m));
  }

  // d_i d_j = d_{j-1} d_i for interior positions i < j.
  for (std::size_t o = 0; o < cat.objects.size(); ++o) {
    const std::size_t p = cat.objects[o].size() - 1;
    for (std::size_t j = 2; j < p; ++j) {
      for (std::size_t i = 1; i < j; ++i) {
        const std::size_t dj = generator_of.at({o, j});
        const std::size_t di = generator_of.at({o, i});
        const std::size_t di_after = generator_of.at({cat.generators[dj].target, i});
        const std::size_t dj1_after = generator_of.at({cat.generators[di].target, j - 1});
        const FlowMorphism lhs =
            compose(g.arrows[di_after], g.arrows[dj], g.objects[o].flow);
        const FlowMorphism rhs =
            compose(g.arrows[dj1_after], g.arrows[di], g.objects[o].flow);
        ++g.relations_checked;
        if (lhs != rhs) {
          g.violations.push_back("relation d" + std::to_string(i) + " d" + std::to_string(j) +
                                 " fails on chain " + std::to_string(o));
        }
      }
    }
  }
  return g;
}

LatchingObject latching_object(const BallDiagram& g, std::size_t budget) {
  const auto& cat = g.category;
  LatchingObject out;
  FlowDiagram diagram;
  std::vector<std::size_t> node_of(cat.objects.size(), static_cast<std::size_t>(-1));
  for (std::size_t o = 0; o < cat.objects.size(); ++o) {
    if (o == cat.terminal) continue;
    node_of[o] = diagram.add_node(g.objects[o].flow);
    out.objects.push_back(o);
  }
  detail::UnionFind components(out.objects.size());
  for (std::size_t a = 0; a < cat.generators.size(); ++a) {
    const ExtArrow& arrow = cat.generators[a];
    if (arrow.target == cat.terminal) continue;
    diagram.add_arrow(node_of[arrow.source], node_of[arrow.target], g.arrows[a]);
    components.unite(node_of[arrow.source], node_of[arrow.target]);
  }
  std::set<std::size_t> roots;
  for (std::size_t k = 0; k < out.objects.size(); ++k) roots.insert(components.find(k));
  out.components = roots.size();
  out.colimit = colimit(diagram, budget);

  // Cocone into G(bottom, top): delete interior position 1 until the chain is
  // (bottom, top).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> generator_of;
  for (std::size_t a = 0; a < cat.generators.size(); ++a) {
    generator_of[{cat.generators[a].source, cat.generators[a].index}] = a;
  }
  std::vector<FlowMorphism> cocone;
  for (std::size_t o : out.objects) {
    FlowMorphism m = identity_morphism(g.objects[o].flow);
    for (std::size_t at = o; at != cat.terminal;) {
      const std::size_t a = generator_of.at({at, 1});
      m = compose(g.arrows[a], m, g.objects[o].flow);
      at = cat.generators[a].target;
    }
    cocone.push_back(std::move(m));
  }
  out.to_ball = mediate(out.colimit, g.objects[cat.terminal].flow, cocone);
  return out;
}

JoinProbe join_probe(const Poset& p, Element a, Element b, Element c, int cap) {
  if (!p.less(a, b) || !p.less(b, c)) {
    fail(Errc::NotComparable, "join probe needs " + p.name(a) + " < " + p.name(b) + " < " + p.name(c));
  }
  const Flow f = poset_flow(p, cap);
  const Restriction left = restriction(f, p.interval(a, b));
  const Restriction right = restriction(f, p.interval(b, c));
  const Restriction whole = restriction(f, p.interval(a, c));
  const Colimit j = join(left.flow, right.flow);
  JoinProbe out;
  out.a = a;
  out.b = b;
  out.c = c;
  out.join_states = j.flow.state_count();
  out.interval_states = whole.flow.state_count();
  for (Element e : p.interval(a, c)) {
    if (!p.comparable(e, b)) out.incomparable.push_back(e);
  }
  out.isomorphic = isomorphic(j.flow, whole.flow);
  return out;
}

LatchingComparison compare_latching(const Poset& p, int cap, std::size_t budget) {
  const Flow f = poset_flow(p, cap);
  const BallDiagram g = ball_diagram(f, budget);
  const LatchingObject l = latching_object(g, budget);
  LatchingComparison out;
  out.latching_states = l.colimit.flow.state_count();
  out.poset_states = f.state_count();
  out.components = l.components;
  out.isomorphic = isomorphic(l.colimit.flow, f);
  const Flow& top = g.objects[g.category.terminal].flow;
  std::map<StateId, std::vector<StateId>> fibres;
  for (StateId s = 0; s < l.to_ball.states.size(); ++s) fibres[l.to_ball.states[s]].push_back(s);
  out.map_injective_on_states = true;
  for (const auto& [t, ss] : fibres) {
    if (ss.size() < 2) continue;
    out.map_injective_on_states = false;
    std::string names;
    for (StateId s : ss) names += (names.empty() ? "" : ", ") + l.colimit.flow.state_name(s);
    out.witnesses.push_back("states {" + names + "} of the latching object all map to " +
                            top.state_name(t));
  }
  out.map_surjective_on_states = fibres.size() == top.state_count();
  for (StateId t = 0; t < top.state_count(); ++t) {
    if (!fibres.count(t)) out.witnesses.push_back("state " + top.state_name(t) + " is not hit");
  }
  out.witnesses.push_back("latching object has " + std::to_string(out.latching_states) +
                          " states, F(P) has " + std::to_string(out.poset_states));
  out.witnesses.push_back("punctured index category has " + std::to_string(out.components) +
                          " connected component(s)");
  return out;
}

}  // namespace flowcalc
