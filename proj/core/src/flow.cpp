#include "flowcalc/flow.hpp"

#include <algorithm>
#include <set>

#include "flowcalc/error.hpp"
#include "flowcalc/homology.hpp"

namespace flowcalc {

Flow::Flow(std::vector<std::string> states, int cap) : cap_(cap), states_(std::move(states)) {
  paths_.assign(states_.size() * states_.size(), SimplicialSet(cap));
}

std::optional<StateId> Flow::find_state(const std::string& name) const {
  const auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<StateId>(it - states_.begin());
}

void Flow::set_path(StateId a, StateId b, SimplicialSet space) {
  if (space.cap() != cap_) {
    fail(Errc::CapMismatch, "path space cap " + std::to_string(space.cap()) + " in a flow of cap " +
                                std::to_string(cap_));
  }
  paths_.at(a * state_count() + b) = std::move(space);
}

void Flow::set_composition(StateId a, StateId b, StateId c, CompositionTable table) {
  if (table.size() != static_cast<std::size_t>(cap_ + 1)) {
    fail(Errc::MalformedFlow, "composition table has the wrong number of levels");
  }
  for (int n = 0; n <= cap_; ++n) {
    if (table[n].size() != path(a, b).size(n) * path(b, c).size(n)) {
      fail(Errc::MalformedFlow, "composition table size mismatch at level " + std::to_string(n));
    }
  }
  compose_[key(a, b, c)] = std::move(table);
}

const Flow::CompositionTable* Flow::composition(StateId a, StateId b, StateId c) const {
  const auto it = compose_.find(key(a, b, c));
  return it == compose_.end() ? nullptr : &it->second;
}

SimplexId Flow::compose(StateId a, StateId b, StateId c, int level, SimplexId x,
                        SimplexId y) const {
  const CompositionTable* t = composition(a, b, c);
  if (!t) {
    fail(Errc::MalformedFlow, "no composition for " + state_name(a) + " -> " + state_name(b) +
                                  " -> " + state_name(c));
  }
  return (*t)[level][x * path(b, c).size(level) + y];
}

SimplexId Flow::compose_chain(const std::vector<StateId>& states, int level,
                              const std::vector<SimplexId>& simplices) const {
  SimplexId acc = simplices.at(0);
  for (std::size_t k = 1; k < simplices.size(); ++k) {
    acc = compose(states[0], states[k], states[k + 1], level, acc, simplices[k]);
  }
  return acc;
}

std::size_t Flow::total_simplices() const {
  std::size_t total = 0;
  for (const auto& p : paths_) total += p.total_size();
  return total;
}

std::vector<std::string> Flow::violations() const {
  std::vector<std::string> out;
  const std::size_t n = state_count();
  auto pair_name = [&](StateId a, StateId b) { return state_name(a) + "->" + state_name(b); };
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      for (const auto& v : path(a, b).violations()) out.push_back("P(" + pair_name(a, b) + ") " + v);
    }
  }
  if (!out.empty()) return out;
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      for (StateId c = 0; c < n; ++c) {
        const bool needed = has_paths(a, b) && has_paths(b, c);
        const CompositionTable* t = composition(a, b, c);
        const std::string where = state_name(a) + "->" + state_name(b) + "->" + state_name(c);
        if (!needed) continue;
        if (!t) {
          out.push_back("missing composition " + where);
          continue;
        }
        if (!has_paths(a, c)) {
          out.push_back("composites " + where + " land in an empty path space");
          continue;
        }
        const auto& pab = path(a, b);
        const auto& pbc = path(b, c);
        const auto& pac = path(a, c);
        bool in_range = true;
        for (int lv = 0; lv <= cap_ && in_range; ++lv) {
          for (SimplexId z : (*t)[lv]) in_range = in_range && z < pac.size(lv);
        }
        if (!in_range) {
          out.push_back("composition " + where + " out of range");
          continue;
        }
        for (int lv = 0; lv <= cap_; ++lv) {
          for (SimplexId x = 0; x < pab.size(lv); ++x) {
            for (SimplexId y = 0; y < pbc.size(lv); ++y) {
              const SimplexId z = (*t)[lv][x * pbc.size(lv) + y];
              for (int i = 0; lv > 0 && i <= lv; ++i) {
                const SimplexId expect =
                    (*t)[lv - 1][pab.face(lv, i, x) * pbc.size(lv - 1) + pbc.face(lv, i, y)];
                if (pac.face(lv, i, z) != expect) {
                  out.push_back("composition " + where + " does not commute with d" +
                                std::to_string(i));
                }
              }
              for (int i = 0; lv < cap_ && i <= lv; ++i) {
                const SimplexId expect = (*t)[lv + 1][pab.degeneracy(lv, i, x) * pbc.size(lv + 1) +
                                                      pbc.degeneracy(lv, i, y)];
                if (pac.degeneracy(lv, i, z) != expect) {
                  out.push_back("composition " + where + " does not commute with s" +
                                std::to_string(i));
                }
              }
            }
          }
        }
      }
    }
  }
  if (!out.empty()) return out;
  // Associativity over every composable quadruple of states.
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!has_paths(a, b)) continue;
      for (StateId c = 0; c < n; ++c) {
        if (!has_paths(b, c)) continue;
        for (StateId d = 0; d < n; ++d) {
          if (!has_paths(c, d)) continue;
          for (int lv = 0; lv <= cap_; ++lv) {
            for (SimplexId x = 0; x < path(a, b).size(lv); ++x) {
              for (SimplexId y = 0; y < path(b, c).size(lv); ++y) {
                const SimplexId xy = compose(a, b, c, lv, x, y);
                for (SimplexId z = 0; z < path(c, d).size(lv); ++z) {
                  const SimplexId left = compose(a, c, d, lv, xy, z);
                  const SimplexId right = compose(a, b, d, lv, x, compose(b, c, d, lv, y, z));
                  if (left != right) {
                    out.push_back("associativity fails on " + state_name(a) + "->" + state_name(b) +
                                  "->" + state_name(c) + "->" + state_name(d) + " at level " +
                                  std::to_string(lv));
                    return out;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Morphisms

bool is_morphism(const FlowMorphism& f, const Flow& source, const Flow& target, std::string* why) {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const std::size_t n = source.state_count();
  if (source.cap() != target.cap()) return bad("cap mismatch");
  if (f.states.size() != n) return bad("state map has the wrong size");
  for (StateId s : f.states) {
    if (s >= target.state_count()) return bad("state map leaves the target");
  }
  if (f.paths.size() != n * n) return bad("path maps missing");
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!source.has_paths(a, b)) continue;
      const auto& tp = target.path(f.states[a], f.states[b]);
      if (!is_simplicial_map(f.on(source, a, b), source.path(a, b), tp)) {
        return bad("path map on " + source.state_name(a) + "->" + source.state_name(b) +
                   " is not simplicial into the image pair");
      }
    }
  }
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!source.has_paths(a, b)) continue;
      for (StateId c = 0; c < n; ++c) {
        if (!source.has_paths(b, c)) continue;
        const StateId fa = f.states[a], fb = f.states[b], fc = f.states[c];
        for (int lv = 0; lv <= source.cap(); ++lv) {
          for (SimplexId x = 0; x < source.path(a, b).size(lv); ++x) {
            for (SimplexId y = 0; y < source.path(b, c).size(lv); ++y) {
              const SimplexId lhs = f.on(source, a, c)(lv, source.compose(a, b, c, lv, x, y));
              const SimplexId rhs =
                  target.compose(fa, fb, fc, lv, f.on(source, a, b)(lv, x), f.on(source, b, c)(lv, y));
              if (lhs != rhs) {
                return bad("composition not preserved on " + source.state_name(a) + "->" +
                           source.state_name(b) + "->" + source.state_name(c));
              }
            }
          }
        }
      }
    }
  }
  return true;
}

FlowMorphism identity_morphism(const Flow& x) {
  FlowMorphism f;
  const std::size_t n = x.state_count();
  for (StateId s = 0; s < n; ++s) f.states.push_back(s);
  f.paths.resize(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (x.has_paths(a, b)) f.paths[a * n + b] = identity_map(x.path(a, b));
    }
  }
  return f;
}

FlowMorphism compose(const FlowMorphism& second, const FlowMorphism& first,
                     const Flow& first_source) {
  FlowMorphism out;
  const std::size_t n = first_source.state_count();
  const std::size_t m = second.states.size();
  for (StateId s : first.states) out.states.push_back(second.states[s]);
  out.paths.resize(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!first_source.has_paths(a, b)) continue;
      out.paths[a * n + b] =
          compose(second.paths[first.states[a] * m + first.states[b]], first.paths[a * n + b]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

Flow::CompositionTable constant_table(const Flow& x, StateId a, StateId b, StateId c) {
  Flow::CompositionTable t(x.cap() + 1);
  for (int lv = 0; lv <= x.cap(); ++lv) t[lv].assign(x.path(a, b).size(lv) * x.path(b, c).size(lv), 0);
  return t;
}

std::vector<std::string> unique_names(std::vector<std::string> names) {
  std::set<std::string> seen;
  for (auto& name : names) {
    while (!seen.insert(name).second) name += "'";
  }
  return names;
}

}  // namespace

Flow glob(const SimplicialSet& z) {
  Flow x({"0", "1"}, z.cap());
  x.set_path(0, 1, z);
  return x;
}

Flow directed_segment(int cap) { return glob(point(cap)); }

Flow discrete_flow(std::vector<std::string> states, int cap) { return Flow(std::move(states), cap); }

Flow terminal_flow(int cap) {
  Flow x({"*"}, cap);
  x.set_path(0, 0, point(cap));
  x.set_composition(0, 0, 0, constant_table(x, 0, 0, 0));
  return x;
}

Flow coproduct(const std::vector<Flow>& parts, int cap) {
  if (!parts.empty()) cap = parts.front().cap();
  std::vector<std::string> names;
  std::vector<StateId> offset;
  for (const auto& p : parts) {
    if (p.cap() != cap) fail(Errc::CapMismatch, "coproduct of flows with different caps");
    offset.push_back(names.size());
    names.insert(names.end(), p.states().begin(), p.states().end());
  }
  Flow out(unique_names(std::move(names)), cap);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Flow& p = parts[k];
    const StateId o = offset[k];
    for (StateId a = 0; a < p.state_count(); ++a) {
      for (StateId b = 0; b < p.state_count(); ++b) {
        if (p.has_paths(a, b)) out.set_path(o + a, o + b, p.path(a, b));
      }
    }
    for (StateId a = 0; a < p.state_count(); ++a) {
      for (StateId b = 0; b < p.state_count(); ++b) {
        for (StateId c = 0; c < p.state_count(); ++c) {
          if (const auto* t = p.composition(a, b, c)) out.set_composition(o + a, o + b, o + c, *t);
        }
      }
    }
  }
  return out;
}

Flow poset_flow(const Poset& poset, int cap) {
  Flow x(poset.names(), cap);
  for (auto [a, b] : poset.strict_pairs()) x.set_path(a, b, point(cap));
  for (auto [a, b] : poset.strict_pairs()) {
    for (Element c = 0; c < poset.size(); ++c) {
      if (poset.less(b, c)) x.set_composition(a, b, c, constant_table(x, a, b, c));
    }
  }
  return x;
}

Restriction restriction(const Flow& x, const std::vector<StateId>& subset) {
  std::set<StateId> seen;
  std::vector<std::string> names;
  for (StateId s : subset) {
    if (s >= x.state_count()) fail(Errc::UnknownState, "state index " + std::to_string(s));
    if (!seen.insert(s).second) fail(Errc::UnknownState, "state listed twice: " + x.state_name(s));
    names.push_back(x.state_name(s));
  }
  Restriction r{Flow(std::move(names), x.cap()), {}, subset};
  const std::size_t k = subset.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (x.has_paths(subset[i], subset[j])) r.flow.set_path(i, j, x.path(subset[i], subset[j]));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        if (const auto* t = x.composition(subset[i], subset[j], subset[l])) {
          r.flow.set_composition(i, j, l, *t);
        }
      }
    }
  }
  r.inclusion.states = subset;
  r.inclusion.paths.resize(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (r.flow.has_paths(i, j)) r.inclusion.paths[i * k + j] = identity_map(r.flow.path(i, j));
    }
  }
  return r;
}

Restriction restriction(const Flow& x, const std::vector<std::string>& subset) {
  std::vector<StateId> ids;
  for (const auto& name : subset) {
    const auto id = x.find_state(name);
    if (!id) fail(Errc::UnknownState, "no state named " + name);
    ids.push_back(*id);
  }
  return restriction(x, ids);
}

Poset state_order(const Flow& x) {
  std::vector<std::pair<Element, Element>> pairs;
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId b = 0; b < x.state_count(); ++b) {
      if (x.has_paths(a, b)) pairs.emplace_back(a, b);
    }
  }
  return Poset::from_relations(x.states(), pairs);
}

FlowReport validate_flow(const Flow& x) {
  const auto problems = x.violations();
  if (!problems.empty()) {
    std::string msg = problems.front();
    if (problems.size() > 1) msg += " (and " + std::to_string(problems.size() - 1) + " more)";
    fail(Errc::MalformedFlow, msg);
  }
  FlowReport r;
  r.loopless = true;
  for (StateId a = 0; a < x.state_count(); ++a) r.loopless = r.loopless && !x.has_paths(a, a);
  if (r.loopless) r.state_order = state_order(x);
  for (StateId s = 0; s < x.state_count(); ++s) {
    bool incoming = false, outgoing = false;
    for (StateId t = 0; t < x.state_count(); ++t) {
      incoming = incoming || x.has_paths(t, s);
      outgoing = outgoing || x.has_paths(s, t);
    }
    if (!incoming) r.initial_states.push_back(s);
    if (!outgoing) r.final_states.push_back(s);
  }
  return r;
}

BallReport is_full_directed_ball(const Flow& x) {
  BallReport r;
  const auto problems = x.violations();
  if (!problems.empty()) {
    r.failures.push_back("malformed flow: " + problems.front());
    r.finite = true;
    return r;
  }
  const FlowReport fr = validate_flow(x);
  r.loopless = fr.loopless;
  if (!r.loopless) r.failures.push_back("flow has a loop");
  if (fr.initial_states.size() == 1 && fr.final_states.size() == 1 &&
      fr.initial_states[0] != fr.final_states[0]) {
    r.unique_ends = true;
    r.bottom = fr.initial_states[0];
    r.top = fr.final_states[0];
  } else {
    r.failures.push_back("expected one initial and one distinct final state, found " +
                         std::to_string(fr.initial_states.size()) + " initial and " +
                         std::to_string(fr.final_states.size()) + " final");
  }
  if (r.unique_ends && r.loopless) {
    r.all_between = true;
    for (StateId s = 0; s < x.state_count(); ++s) {
      const bool from_bottom = s == *r.bottom || x.path(*r.bottom, s).size(0) > 0;
      const bool to_top = s == *r.top || x.path(s, *r.top).size(0) > 0;
      if (!from_bottom || !to_top) {
        r.all_between = false;
        r.failures.push_back("state " + x.state_name(s) + " is not between the ends");
      }
    }
  }
  r.contractible_paths = true;
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId b = 0; b < x.state_count(); ++b) {
      if (x.has_paths(a, b) && !is_homology_contractible(x.path(a, b))) {
        r.contractible_paths = false;
        r.failures.push_back("P(" + x.state_name(a) + "," + x.state_name(b) +
                             ") is not homology-contractible");
      }
    }
  }
  return r;
}

Pullback pullback(const Flow& x, const FlowMorphism& f, const Flow& z, const FlowMorphism& g,
                  const Flow& w) {
  if (x.cap() != z.cap() || x.cap() != w.cap()) fail(Errc::CapMismatch, "pullback caps differ");
  Pullback pb;
  std::vector<std::string> names;
  for (StateId a = 0; a < x.state_count(); ++a) {
    for (StateId c = 0; c < z.state_count(); ++c) {
      if (f.states[a] == g.states[c]) {
        pb.states.emplace_back(a, c);
        names.push_back("(" + x.state_name(a) + "," + z.state_name(c) + ")");
      }
    }
  }
  const std::size_t n = pb.states.size();
  const int cap = x.cap();
  pb.flow = Flow(std::move(names), cap);
  // Per pair: index of (p, q) in the product and its position in the pullback.
  std::vector<std::vector<std::vector<SimplexId>>> index(n * n);
  pb.to_x.paths.resize(n * n);
  pb.to_z.paths.resize(n * n);
  for (StateId i = 0; i < n; ++i) {
    for (StateId j = 0; j < n; ++j) {
      const auto [a, c] = pb.states[i];
      const auto [b, d] = pb.states[j];
      if (!x.has_paths(a, b) || !z.has_paths(c, d)) continue;
      const auto& px = x.path(a, b);
      const auto& pz = z.path(c, d);
      const SimplicialSet prod = product(px, pz);
      std::vector<std::vector<char>> keep(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        keep[lv].assign(prod.size(lv), 0);
        for (SimplexId p = 0; p < px.size(lv); ++p) {
          for (SimplexId q = 0; q < pz.size(lv); ++q) {
            if (f.on(x, a, b)(lv, p) == g.on(z, c, d)(lv, q)) {
              keep[lv][product_index(px, pz, lv, p, q)] = 1;
            }
          }
        }
      }
      auto [sub, idx] = prod.restrict_to(keep);
      if (sub.empty()) continue;
      SimplicialMap to_x, to_z;
      to_x.levels.resize(cap + 1);
      to_z.levels.resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        to_x.levels[lv].resize(sub.size(lv));
        to_z.levels[lv].resize(sub.size(lv));
        for (SimplexId p = 0; p < px.size(lv); ++p) {
          for (SimplexId q = 0; q < pz.size(lv); ++q) {
            const SimplexId s = idx[lv][product_index(px, pz, lv, p, q)];
            if (s == kNoSimplex) continue;
            to_x.levels[lv][s] = p;
            to_z.levels[lv][s] = q;
          }
        }
      }
      pb.flow.set_path(i, j, std::move(sub));
      pb.to_x.paths[i * n + j] = std::move(to_x);
      pb.to_z.paths[i * n + j] = std::move(to_z);
      index[i * n + j] = std::move(idx);
    }
  }
  for (StateId i = 0; i < n; ++i) {
    for (StateId j = 0; j < n; ++j) {
      if (!pb.flow.has_paths(i, j)) continue;
      for (StateId k = 0; k < n; ++k) {
        if (!pb.flow.has_paths(j, k)) continue;
        const auto [a, c] = pb.states[i];
        const auto [b, d] = pb.states[j];
        const auto [e, h] = pb.states[k];
        Flow::CompositionTable t(cap + 1);
        for (int lv = 0; lv <= cap; ++lv) {
          const std::size_t right = pb.flow.path(j, k).size(lv);
          t[lv].resize(pb.flow.path(i, j).size(lv) * right);
          for (SimplexId s = 0; s < pb.flow.path(i, j).size(lv); ++s) {
            for (SimplexId u = 0; u < right; ++u) {
              const SimplexId px = x.compose(a, b, e, lv, pb.to_x.paths[i * n + j](lv, s),
                                             pb.to_x.paths[j * n + k](lv, u));
              const SimplexId pz = z.compose(c, d, h, lv, pb.to_z.paths[i * n + j](lv, s),
                                             pb.to_z.paths[j * n + k](lv, u));
              t[lv][s * right + u] = index[i * n + k][lv][product_index(
                  x.path(a, e), z.path(c, h), lv, px, pz)];
            }
          }
        }
        pb.flow.set_composition(i, j, k, std::move(t));
      }
    }
  }
  for (const auto& [a, c] : pb.states) {
    pb.to_x.states.push_back(a);
    pb.to_z.states.push_back(c);
  }
  return pb;
}

FlowMorphism to_terminal(const Flow& x, const Flow& terminal) {
  FlowMorphism f;
  f.states.assign(x.state_count(), 0);
  const std::size_t n = x.state_count();
  f.paths.resize(n * n);
  (void)terminal;
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!x.has_paths(a, b)) continue;
      SimplicialMap m;
      m.levels.resize(x.cap() + 1);
      for (int lv = 0; lv <= x.cap(); ++lv) m.levels[lv].assign(x.path(a, b).size(lv), 0);
      f.paths[a * n + b] = std::move(m);
    }
  }
  return f;
}

}  // namespace flowcalc
