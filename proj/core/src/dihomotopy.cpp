#include "flowcalc/dihomotopy.hpp"

#include <algorithm>
#include <set>

#include "flowcalc/error.hpp"

namespace flowcalc {

std::string_view to_string(Direction d) { return d == Direction::Minus ? "minus" : "plus"; }

bool StateBranch::contractible() const { return !empty() && is_homology_contractible(space); }

namespace {

StateBranch branch_at(const Flow& x, StateId s, Direction dir) {
  const std::size_t n = x.state_count();
  const int cap = x.cap();
  const bool minus = dir == Direction::Minus;
  auto path = [&](StateId other) -> const SimplicialSet& {
    return minus ? x.path(s, other) : x.path(other, s);
  };
  StateBranch out;
  out.state = s;
  out.classes.resize(n);
  std::vector<SimplicialSet> parts;
  std::vector<std::size_t> part_of(n, static_cast<std::size_t>(-1));
  for (StateId t = 0; t < n; ++t) {
    if (path(t).empty()) continue;
    part_of[t] = parts.size();
    parts.push_back(path(t));
  }
  if (parts.empty()) {
    out.space = empty_set(cap);
    return out;
  }
  const DisjointUnion u = disjoint_union(parts, cap);
  std::vector<SimplexPair> seeds;
  for (StateId t = 0; t < n; ++t) {
    if (part_of[t] == static_cast<std::size_t>(-1)) continue;
    for (StateId r = 0; r < n; ++r) {
      if (minus) {
        // x in P(s,t), y in P(t,r): x ~ x * y in P(s,r).
        if (!x.has_paths(t, r)) continue;
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId p = 0; p < x.path(s, t).size(lv); ++p) {
            for (SimplexId q = 0; q < x.path(t, r).size(lv); ++q) {
              const SimplexId pq = x.compose(s, t, r, lv, p, q);
              seeds.push_back({lv, static_cast<SimplexId>(u.offsets[part_of[t]][lv] + p),
                               static_cast<SimplexId>(u.offsets[part_of[r]][lv] + pq)});
            }
          }
        }
      } else {
        // y in P(t,s), x in P(r,t): y ~ x * y in P(r,s).
        if (!x.has_paths(r, t)) continue;
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId q = 0; q < x.path(t, s).size(lv); ++q) {
            for (SimplexId p = 0; p < x.path(r, t).size(lv); ++p) {
              const SimplexId pq = x.compose(r, t, s, lv, p, q);
              seeds.push_back({lv, static_cast<SimplexId>(u.offsets[part_of[t]][lv] + q),
                               static_cast<SimplexId>(u.offsets[part_of[r]][lv] + pq)});
            }
          }
        }
      }
    }
  }
  Quotient q = quotient(u.set, seeds);
  for (StateId t = 0; t < n; ++t) {
    if (part_of[t] == static_cast<std::size_t>(-1)) continue;
    out.classes[t].resize(cap + 1);
    for (int lv = 0; lv <= cap; ++lv) {
      for (SimplexId p = 0; p < path(t).size(lv); ++p) {
        out.classes[t][lv].push_back(q.projection(lv, u.offsets[part_of[t]][lv] + p));
      }
    }
  }
  out.space = std::move(q.set);
  out.homology = homology_profile(out.space);
  return out;
}

}  // namespace

BranchReport branching_space(const Flow& x, Direction direction) {
  BranchReport r;
  r.direction = direction;
  for (StateId s = 0; s < x.state_count(); ++s) r.states.push_back(branch_at(x, s, direction));
  return r;
}

SimplicialSet total_branching_space(const BranchReport& report) {
  std::vector<SimplicialSet> parts;
  int cap = kDefaultCap;
  for (const auto& s : report.states) {
    cap = s.space.cap();
    if (!s.empty()) parts.push_back(s.space);
  }
  return disjoint_union(parts, cap).set;
}

BranchProfile branching_profile(const Flow& x, Direction direction) {
  BranchProfile out;
  for (const auto& s : branching_space(x, direction).states) {
    if (s.empty()) {
      out.emplace_back();
    } else {
      out.emplace_back(s.homology);
    }
  }
  return out;
}

BottomBranchReport bottom_branch_check(const Flow& d) {
  const BallReport ball = is_full_directed_ball(d);
  if (!ball.ok()) {
    std::string why;
    for (const auto& f : ball.failures) why += (why.empty() ? "" : "; ") + f;
    fail(Errc::NotABall, why);
  }
  const StateId bottom = *ball.bottom;
  BottomBranchReport r;
  const Flow f = poset_flow(state_order(d), d.cap());
  const StateBranch poset_branch = branch_at(f, bottom, Direction::Minus);
  r.poset_classes = poset_branch.space.size(0);
  r.single_class = r.poset_classes == 1;
  const StateBranch own = branch_at(d, bottom, Direction::Minus);
  r.contractible = own.contractible();
  r.homology = own.homology;
  return r;
}

Subdivision t_subdivide(const Flow& x, StateId a, StateId b, SimplexId u, const Flow& ball,
                        std::size_t budget) {
  for (StateId s = 0; s < x.state_count(); ++s) {
    if (x.has_paths(s, s)) fail(Errc::NotLoopless, "state " + x.state_name(s) + " has a loop");
  }
  if (a >= x.state_count() || b >= x.state_count()) fail(Errc::UnknownState, "edge endpoint");
  if (u >= x.path(a, b).size(0)) {
    fail(Errc::UnknownState, "no level-0 path " + std::to_string(u) + " from " + x.state_name(a) +
                                 " to " + x.state_name(b));
  }
  const BallReport report = is_full_directed_ball(ball);
  if (!report.ok()) {
    std::string why;
    for (const auto& f : report.failures) why += (why.empty() ? "" : "; ") + f;
    fail(Errc::NotABall, why);
  }
  const int cap = x.cap();
  if (ball.cap() != cap) fail(Errc::CapMismatch, "ball and flow caps differ");
  const Flow segment = directed_segment(cap);
  auto pick = [&](const Flow& target, StateId from, StateId to, SimplexId vertex) {
    FlowMorphism f;
    f.states = {from, to};
    f.paths.resize(4);
    SimplicialMap m;
    m.levels.resize(cap + 1);
    for (int lv = 0; lv <= cap; ++lv) m.levels[lv] = {target.path(from, to).lift(0, lv, vertex)};
    f.paths[1] = std::move(m);
    return f;
  };
  FlowDiagram d;
  d.add_node(x);
  d.add_node(ball);
  d.add_node(segment);
  d.add_arrow(2, 0, pick(x, a, b, u));
  d.add_arrow(2, 1, pick(ball, *report.bottom, *report.top, 0));
  Colimit c = colimit(d, budget);
  return {std::move(c.flow), std::move(c.injections[0]), std::move(c.injections[1])};
}

InvarianceReport check_invariance(const Flow& x, const Flow& y, const FlowMorphism& f) {
  if (f.states.size() != x.state_count()) {
    fail(Errc::MalformedSubdivision, "state map has the wrong size");
  }
  std::set<StateId> image;
  for (StateId s : f.states) {
    if (s >= y.state_count()) fail(Errc::MalformedSubdivision, "state map leaves the target");
    if (!image.insert(s).second) {
      fail(Errc::MalformedSubdivision, "state map is not injective at " + y.state_name(s));
    }
  }
  InvarianceReport r;
  auto show = [](const std::optional<std::vector<HomologyGroup>>& p) {
    if (!p) return std::string("empty");
    std::string s = "(";
    for (std::size_t k = 0; k < p->size(); ++k) s += (k ? ", " : "") + (*p)[k].to_string();
    return s + ")";
  };
  for (Direction dir : {Direction::Minus, Direction::Plus}) {
    const BranchProfile px = branching_profile(x, dir);
    const BranchProfile py = branching_profile(y, dir);
    for (StateId s = 0; s < x.state_count(); ++s) {
      StateComparison c{dir, s, f.states[s], px[s], py[f.states[s]], false};
      c.ok = c.before == c.after;
      if (!c.ok) {
        r.failures.push_back(std::string(to_string(dir)) + " at " + x.state_name(s) + ": " +
                             show(c.before) + " became " + show(c.after));
      }
      r.comparisons.push_back(std::move(c));
    }
    for (StateId t = 0; t < y.state_count(); ++t) {
      if (image.count(t)) continue;
      NewStateCheck c{dir, t, py[t], false};
      c.ok = !c.profile || (c.profile->at(0) == HomologyGroup{1, {}} &&
                            std::all_of(c.profile->begin() + 1, c.profile->end(),
                                        [](const HomologyGroup& h) { return h.trivial(); }));
      if (!c.ok) {
        r.failures.push_back(std::string(to_string(dir)) + " at new state " + y.state_name(t) +
                             " is " + show(c.profile) + ", neither empty nor contractible");
      }
      r.new_states.push_back(std::move(c));
    }
  }
  return r;
}

}  // namespace flowcalc
