#include "flowcalc/presentation.hpp"

#include <boost/container_hash/hash.hpp>
#include <deque>
#include <set>
#include <unordered_map>

#include "flowcalc/error.hpp"
#include "flowcalc/poset.hpp"
#include "union_find.hpp"

namespace flowcalc {

std::size_t FlowPresentation::add_block(StateId source, StateId target, SimplicialSet space,
                                        std::string label) {
  generators.push_back({source, target, std::move(space), std::move(label)});
  return generators.size() - 1;
}

// ---------------------------------------------------------------------------
// Saturation

namespace {

using Key = std::vector<std::uint32_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const { return boost::hash_range(k.begin(), k.end()); }
};

constexpr std::uint32_t kNone = static_cast<std::uint32_t>(-1);

}  // namespace

struct Saturation::Data {
  int cap = 0;
  std::size_t states = 0;
  std::vector<StateId> block_source, block_target;
  std::vector<std::vector<std::size_t>> letter_offset;                 // [level][block]
  std::vector<std::vector<std::pair<std::size_t, SimplexId>>> letters;  // [level][letter]
  std::vector<std::unordered_map<Key, std::uint32_t, KeyHash>> index;  // [level]
  std::vector<std::vector<Key>> words;
  std::vector<std::vector<StateId>> word_source, word_target;
  std::vector<std::vector<SimplexId>> word_class;
  std::vector<std::vector<std::vector<Word>>> reps;  // [pair][level][class]
  std::vector<std::size_t> counts;

  std::optional<Key> key_of(const Word& w) const {
    if (w.level < 0 || w.level > cap || w.letters.empty()) return std::nullopt;
    Key k;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
      const Letter& l = w.letters[i];
      if (l.block >= block_source.size()) return std::nullopt;
      const std::size_t end = l.block + 1 < letter_offset[w.level].size()
                                  ? letter_offset[w.level][l.block + 1]
                                  : letters[w.level].size();
      const std::size_t id = letter_offset[w.level][l.block] + l.simplex;
      if (id >= end) return std::nullopt;
      if (i > 0 && block_target[w.letters[i - 1].block] != block_source[l.block]) {
        return std::nullopt;
      }
      k.push_back(static_cast<std::uint32_t>(id));
    }
    return k;
  }
};

std::optional<SimplexId> Saturation::class_of(const Word& w) const {
  const auto k = data->key_of(w);
  if (!k) return std::nullopt;
  const auto it = data->index[w.level].find(*k);
  if (it == data->index[w.level].end()) return std::nullopt;
  return data->word_class[w.level][it->second];
}

const Word& Saturation::representative(StateId a, StateId b, int level, SimplexId c) const {
  return data->reps.at(a * data->states + b).at(level).at(c);
}

const std::vector<std::size_t>& Saturation::word_counts() const { return data->counts; }

Saturation saturate(const FlowPresentation& pres, std::size_t budget) {
  auto d = std::make_shared<Saturation::Data>();
  const int cap = pres.cap;
  const std::size_t ns = pres.states.size();
  d->cap = cap;
  d->states = ns;

  std::vector<std::pair<Element, Element>> order;
  for (const auto& g : pres.generators) {
    if (g.source >= ns || g.target >= ns) fail(Errc::UnknownState, "generator endpoint out of range");
    if (g.space.cap() != cap) fail(Errc::CapMismatch, "generator block cap differs from presentation");
    d->block_source.push_back(g.source);
    d->block_target.push_back(g.target);
    if (g.space.empty()) continue;
    if (g.source == g.target) {
      fail(Errc::NotLoopless, "generator " + g.label + " loops at " + pres.states[g.source]);
    }
    order.emplace_back(g.source, g.target);
  }
  try {
    Poset::from_relations(pres.states, order);
  } catch (const Error& e) {
    fail(Errc::NotLoopless, e.what());
  }

  const std::size_t nb = pres.generators.size();
  d->letter_offset.resize(cap + 1);
  d->letters.resize(cap + 1);
  std::vector<std::vector<std::vector<std::uint32_t>>> out_letters(cap + 1), in_letters(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    out_letters[n].resize(ns);
    in_letters[n].resize(ns);
    for (std::size_t b = 0; b < nb; ++b) {
      d->letter_offset[n].push_back(d->letters[n].size());
      for (SimplexId s = 0; s < pres.generators[b].space.size(n); ++s) {
        const auto id = static_cast<std::uint32_t>(d->letters[n].size());
        d->letters[n].emplace_back(b, s);
        out_letters[n][pres.generators[b].source].push_back(id);
        in_letters[n][pres.generators[b].target].push_back(id);
      }
    }
  }
  auto letter_at = [&](int n, std::size_t block, SimplexId s) {
    return static_cast<std::uint32_t>(d->letter_offset[n][block] + s);
  };

  // Enumerate every chain of letters, level by level.
  d->index.resize(cap + 1);
  d->words.resize(cap + 1);
  d->word_source.resize(cap + 1);
  d->word_target.resize(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    Key current;
    auto extend = [&](auto&& self, StateId start, StateId at) -> void {
      for (std::uint32_t l : out_letters[n][at]) {
        current.push_back(l);
        const StateId next = pres.generators[d->letters[n][l].first].target;
        if (d->words[n].size() >= budget) {
          fail(Errc::BudgetExceeded, "more than " + std::to_string(budget) + " words at level " +
                                         std::to_string(n) + " (while enumerating " +
                                         pres.states[start] + " -> " + pres.states[next] + ")");
        }
        const auto id = static_cast<std::uint32_t>(d->words[n].size());
        d->index[n].emplace(current, id);
        d->words[n].push_back(current);
        d->word_source[n].push_back(start);
        d->word_target[n].push_back(next);
        self(self, start, next);
        current.pop_back();
      }
    };
    for (StateId a = 0; a < ns; ++a) extend(extend, a, a);
    d->counts.push_back(d->words[n].size());
  }

  auto find = [&](int n, const Key& k) {
    const auto it = d->index[n].find(k);
    return it == d->index[n].end() ? kNone : it->second;
  };
  auto face_key = [&](int n, int i, const Key& k) {
    Key out;
    out.reserve(k.size());
    for (std::uint32_t l : k) {
      const auto [b, s] = d->letters[n][l];
      out.push_back(letter_at(n - 1, b, pres.generators[b].space.face(n, i, s)));
    }
    return out;
  };
  auto degen_key = [&](int n, int i, const Key& k) {
    Key out;
    out.reserve(k.size());
    for (std::uint32_t l : k) {
      const auto [b, s] = d->letters[n][l];
      out.push_back(letter_at(n + 1, b, pres.generators[b].space.degeneracy(n, i, s)));
    }
    return out;
  };

  struct Pending {
    int level;
    std::uint32_t a, b;
  };
  std::deque<Pending> queue;
  for (std::size_t r = 0; r < pres.relations.size(); ++r) {
    const auto& [lhs, rhs] = pres.relations[r];
    const auto kl = d->key_of(lhs);
    const auto kr = d->key_of(rhs);
    if (!kl || !kr || lhs.level != rhs.level) {
      fail(Errc::MalformedFlow, "relation " + std::to_string(r + 1) + " is not a pair of chains");
    }
    const std::uint32_t a = find(lhs.level, *kl);
    const std::uint32_t b = find(rhs.level, *kr);
    if (d->word_source[lhs.level][a] != d->word_source[lhs.level][b] ||
        d->word_target[lhs.level][a] != d->word_target[lhs.level][b]) {
      fail(Errc::MalformedFlow, "relation " + std::to_string(r + 1) + " has mismatched endpoints");
    }
    queue.push_back({lhs.level, a, b});
  }

  std::vector<detail::UnionFind> uf;
  for (int n = 0; n <= cap; ++n) uf.emplace_back(d->words[n].size());
  while (!queue.empty()) {
    const Pending p = queue.front();
    queue.pop_front();
    const int n = p.level;
    if (!uf[n].unite(p.a, p.b)) continue;
    const Key& ka = d->words[n][p.a];
    const Key& kb = d->words[n][p.b];
    for (int i = 0; n > 0 && i <= n; ++i) {
      queue.push_back({n - 1, find(n - 1, face_key(n, i, ka)), find(n - 1, face_key(n, i, kb))});
    }
    for (int i = 0; n < cap && i <= n; ++i) {
      queue.push_back({n + 1, find(n + 1, degen_key(n, i, ka)), find(n + 1, degen_key(n, i, kb))});
    }
    for (std::uint32_t l : in_letters[n][d->word_source[n][p.a]]) {
      Key la{l}, lb{l};
      la.insert(la.end(), ka.begin(), ka.end());
      lb.insert(lb.end(), kb.begin(), kb.end());
      queue.push_back({n, find(n, la), find(n, lb)});
    }
    for (std::uint32_t l : out_letters[n][d->word_target[n][p.a]]) {
      Key al = ka, bl = kb;
      al.push_back(l);
      bl.push_back(l);
      queue.push_back({n, find(n, al), find(n, bl)});
    }
  }

  // Number classes per endpoint pair in order of first word.
  d->word_class.resize(cap + 1);
  d->reps.resize(ns * ns);
  for (auto& r : d->reps) r.resize(cap + 1);
  std::vector<std::vector<std::uint32_t>> rep_ids(ns * ns * (cap + 1));
  for (int n = 0; n <= cap; ++n) {
    std::vector<SimplexId> root_class(d->words[n].size(), kNoSimplex);
    d->word_class[n].resize(d->words[n].size());
    for (std::uint32_t w = 0; w < d->words[n].size(); ++w) {
      const std::size_t root = uf[n].find(w);
      const std::size_t pair = d->word_source[n][w] * ns + d->word_target[n][w];
      if (root_class[root] == kNoSimplex) {
        auto& reps = rep_ids[pair * (cap + 1) + n];
        root_class[root] = static_cast<SimplexId>(reps.size());
        reps.push_back(w);
        Word word{n, {}};
        for (std::uint32_t l : d->words[n][w]) {
          word.letters.push_back({d->letters[n][l].first, d->letters[n][l].second});
        }
        d->reps[pair][n].push_back(std::move(word));
      }
      d->word_class[n][w] = root_class[root];
    }
  }

  Saturation out;
  out.flow = Flow(pres.states, cap);
  for (StateId a = 0; a < ns; ++a) {
    for (StateId b = 0; b < ns; ++b) {
      const std::size_t pair = a * ns + b;
      if (rep_ids[pair * (cap + 1)].empty()) continue;
      std::vector<std::size_t> sizes(cap + 1);
      std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
      for (int n = 0; n <= cap; ++n) {
        const auto& reps = rep_ids[pair * (cap + 1) + n];
        sizes[n] = reps.size();
        for (int i = 0; n > 0 && i <= n; ++i) {
          faces[n].emplace_back();
          for (std::uint32_t w : reps) {
            faces[n].back().push_back(
                d->word_class[n - 1][find(n - 1, face_key(n, i, d->words[n][w]))]);
          }
        }
        for (int i = 0; n < cap && i <= n; ++i) {
          degens[n].emplace_back();
          for (std::uint32_t w : reps) {
            degens[n].back().push_back(
                d->word_class[n + 1][find(n + 1, degen_key(n, i, d->words[n][w]))]);
          }
        }
      }
      out.flow.set_path(a, b, SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces),
                                                        std::move(degens)));
    }
  }
  for (StateId a = 0; a < ns; ++a) {
    for (StateId b = 0; b < ns; ++b) {
      if (!out.flow.has_paths(a, b)) continue;
      for (StateId c = 0; c < ns; ++c) {
        if (!out.flow.has_paths(b, c)) continue;
        Flow::CompositionTable table(cap + 1);
        for (int n = 0; n <= cap; ++n) {
          const auto& left = rep_ids[(a * ns + b) * (cap + 1) + n];
          const auto& right = rep_ids[(b * ns + c) * (cap + 1) + n];
          for (std::uint32_t x : left) {
            for (std::uint32_t y : right) {
              Key k = d->words[n][x];
              k.insert(k.end(), d->words[n][y].begin(), d->words[n][y].end());
              table[n].push_back(d->word_class[n][find(n, k)]);
            }
          }
        }
        out.flow.set_composition(a, b, c, std::move(table));
      }
    }
  }
  out.embedding.resize(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    out.embedding[b].resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
      for (SimplexId s = 0; s < pres.generators[b].space.size(n); ++s) {
        out.embedding[b][n].push_back(d->word_class[n][find(n, Key{letter_at(n, b, s)})]);
      }
    }
  }
  out.data = std::move(d);
  return out;
}

// ---------------------------------------------------------------------------
// Indecomposable generators of a loopless flow

namespace {

struct Decomposition {
  StateId mid = 0;
  SimplexId x = 0;
  SimplexId y = 0;
};

/// For every nonempty path space, the sub-simplicial set S generated by the
/// indecomposable simplices, and a chosen factorisation of everything else.
/// fact() spells any simplex as a word in the S letters; letter blocks are
/// local pair ordinals.
class Generators {
 public:
  struct Pair {
    StateId a = 0;
    StateId b = 0;
    SimplicialSet space;
    std::vector<std::vector<SimplexId>> local;  // node simplex -> S index or kNoSimplex
    std::vector<std::vector<SimplexId>> node;   // S index -> node simplex
    std::vector<std::vector<std::optional<Decomposition>>> split;
  };

  explicit Generators(const Flow& x) : x_(x) {
    const std::size_t n = x.state_count();
    const int cap = x.cap();
    for (StateId a = 0; a < n; ++a) {
      if (x.has_paths(a, a)) fail(Errc::NotLoopless, "state " + x.state_name(a) + " has a loop");
    }
    ordinal_.assign(n * n, kNoSimplex);
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        if (!x.has_paths(a, b)) continue;
        ordinal_[a * n + b] = static_cast<SimplexId>(pairs_.size());
        Pair p;
        p.a = a;
        p.b = b;
        p.split.resize(cap + 1);
        for (int lv = 0; lv <= cap; ++lv) p.split[lv].resize(x.path(a, b).size(lv));
        pairs_.push_back(std::move(p));
      }
    }
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        if (!x.has_paths(a, b)) continue;
        for (StateId c = 0; c < n; ++c) {
          if (!x.has_paths(b, c)) continue;
          auto& target = pairs_[ordinal_[a * n + c]];
          for (int lv = 0; lv <= cap; ++lv) {
            for (SimplexId u = 0; u < x.path(a, b).size(lv); ++u) {
              for (SimplexId v = 0; v < x.path(b, c).size(lv); ++v) {
                auto& slot = target.split[lv][x.compose(a, b, c, lv, u, v)];
                if (!slot) slot = Decomposition{b, u, v};
              }
            }
          }
        }
      }
    }
    for (auto& p : pairs_) {
      const SimplicialSet& full = x.path(p.a, p.b);
      std::vector<std::vector<char>> keep(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        keep[lv].resize(full.size(lv));
        for (SimplexId s = 0; s < full.size(lv); ++s) keep[lv][s] = !p.split[lv][s];
      }
      for (int lv = cap; lv >= 1; --lv) {
        for (SimplexId s = 0; s < full.size(lv); ++s) {
          if (!keep[lv][s]) continue;
          for (int i = 0; i <= lv; ++i) keep[lv - 1][full.face(lv, i, s)] = 1;
        }
      }
      for (int lv = 0; lv < cap; ++lv) {
        for (SimplexId s = 0; s < full.size(lv); ++s) {
          if (!keep[lv][s]) continue;
          for (int i = 0; i <= lv; ++i) keep[lv + 1][full.degeneracy(lv, i, s)] = 1;
        }
      }
      auto [space, local] = full.restrict_to(keep);
      p.space = std::move(space);
      p.local = std::move(local);
      p.node.resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        p.node[lv].resize(p.space.size(lv));
        for (SimplexId s = 0; s < full.size(lv); ++s) {
          if (p.local[lv][s] != kNoSimplex) p.node[lv][p.local[lv][s]] = s;
        }
      }
    }
    memo_.resize(pairs_.size());
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      memo_[k].resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) memo_[k][lv].resize(x.path(pairs_[k].a, pairs_[k].b).size(lv));
    }
  }

  const Flow& flow() const { return x_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t ordinal(StateId a, StateId b) const { return ordinal_[a * x_.state_count() + b]; }

  const std::vector<Letter>& fact(StateId a, StateId b, int lv, SimplexId z) {
    const std::size_t k = ordinal(a, b);
    auto& slot = memo_[k][lv][z];
    if (slot) return *slot;
    const Pair& p = pairs_[k];
    std::vector<Letter> out;
    if (p.local[lv][z] != kNoSimplex) {
      out.push_back({k, p.local[lv][z]});
    } else {
      const Decomposition dec = *p.split[lv][z];
      out = fact(a, dec.mid, lv, dec.x);
      const auto& tail = fact(dec.mid, b, lv, dec.y);
      out.insert(out.end(), tail.begin(), tail.end());
    }
    slot = std::move(out);
    return *slot;
  }

  /// Adds one block per pair; returns the block id of local ordinal 0.
  std::size_t attach(FlowPresentation& pres, const std::vector<StateId>& state_map,
                     const std::string& tag) const {
    const std::size_t base = pres.generators.size();
    for (const auto& p : pairs_) {
      pres.add_block(state_map[p.a], state_map[p.b], p.space,
                     tag + x_.state_name(p.a) + "->" + x_.state_name(p.b));
    }
    return base;
  }

  template <class F>
  void for_each_composable(F&& f) const {
    const std::size_t n = x_.state_count();
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        if (!x_.has_paths(a, b)) continue;
        for (StateId c = 0; c < n; ++c) {
          if (!x_.has_paths(b, c)) continue;
          for (int lv = 0; lv <= x_.cap(); ++lv) {
            for (SimplexId u = 0; u < x_.path(a, b).size(lv); ++u) {
              for (SimplexId v = 0; v < x_.path(b, c).size(lv); ++v) f(a, b, c, lv, u, v);
            }
          }
        }
      }
    }
  }

 private:
  const Flow& x_;
  std::vector<Pair> pairs_;
  std::vector<SimplexId> ordinal_;
  std::vector<std::vector<std::vector<std::optional<std::vector<Letter>>>>> memo_;
};

std::vector<Letter> shifted(const std::vector<Letter>& letters, std::size_t base) {
  std::vector<Letter> out = letters;
  for (auto& l : out) l.block += base;
  return out;
}

std::vector<Letter> concat(std::vector<Letter> a, const std::vector<Letter>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

FlowPresentation present(const Flow& x) {
  Generators gen(x);
  FlowPresentation pres;
  pres.states = x.states();
  pres.cap = x.cap();
  std::vector<StateId> ids(x.state_count());
  for (StateId s = 0; s < ids.size(); ++s) ids[s] = s;
  gen.attach(pres, ids, "");
  gen.for_each_composable([&](StateId a, StateId b, StateId c, int lv, SimplexId u, SimplexId v) {
    auto lhs = concat(gen.fact(a, b, lv, u), gen.fact(b, c, lv, v));
    const auto& rhs = gen.fact(a, c, lv, x.compose(a, b, c, lv, u, v));
    if (lhs != rhs) pres.relations.push_back({Word{lv, std::move(lhs)}, Word{lv, rhs}});
  });
  return pres;
}

// ---------------------------------------------------------------------------
// Colimits

std::size_t FlowDiagram::add_node(Flow x) {
  nodes.push_back(std::move(x));
  return nodes.size() - 1;
}

void FlowDiagram::add_arrow(std::size_t source, std::size_t target, FlowMorphism map) {
  arrows.push_back({source, target, std::move(map)});
}

Colimit colimit(const FlowDiagram& diagram, std::size_t budget) {
  const int cap = diagram.nodes.empty() ? kDefaultCap : diagram.nodes.front().cap();
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const auto& x : diagram.nodes) {
    if (x.cap() != cap) fail(Errc::CapMismatch, "diagram nodes have different caps");
    offset.push_back(total);
    total += x.state_count();
  }
  for (const auto& arrow : diagram.arrows) {
    std::string why;
    if (arrow.source >= diagram.nodes.size() || arrow.target >= diagram.nodes.size() ||
        !is_morphism(arrow.map, diagram.nodes[arrow.source], diagram.nodes[arrow.target], &why)) {
      fail(Errc::MalformedFlow, "diagram arrow is not a morphism: " + why);
    }
  }

  detail::UnionFind uf(total);
  for (const auto& arrow : diagram.arrows) {
    for (StateId s = 0; s < arrow.map.states.size(); ++s) {
      uf.unite(offset[arrow.source] + s, offset[arrow.target] + arrow.map.states[s]);
    }
  }
  Colimit out;
  std::vector<StateId> class_of_root(total, kNoSimplex);
  std::vector<std::vector<StateId>> state_map(diagram.nodes.size());
  std::vector<std::string> names;
  std::set<std::string> taken;
  for (std::size_t i = 0; i < diagram.nodes.size(); ++i) {
    const Flow& x = diagram.nodes[i];
    for (StateId s = 0; s < x.state_count(); ++s) {
      const std::size_t root = uf.find(offset[i] + s);
      if (class_of_root[root] == kNoSimplex) {
        class_of_root[root] = names.size();
        std::string name = x.state_name(s);
        while (!taken.insert(name).second) name += "'";
        names.push_back(std::move(name));
        out.state_origin.emplace_back(i, s);
      }
      state_map[i].push_back(class_of_root[root]);
    }
  }

  FlowPresentation pres;
  pres.states = names;
  pres.cap = cap;
  std::vector<Generators> gens;
  gens.reserve(diagram.nodes.size());
  std::vector<std::size_t> base;
  for (std::size_t i = 0; i < diagram.nodes.size(); ++i) {
    gens.emplace_back(diagram.nodes[i]);
    base.push_back(gens.back().attach(pres, state_map[i], std::to_string(i) + ":"));
    for (const auto& p : gens.back().pairs()) out.origins.push_back({i, p.a, p.b, p.node});
  }
  for (std::size_t i = 0; i < diagram.nodes.size(); ++i) {
    Generators& gen = gens[i];
    const Flow& x = diagram.nodes[i];
    gen.for_each_composable([&](StateId a, StateId b, StateId c, int lv, SimplexId u, SimplexId v) {
      auto lhs = concat(gen.fact(a, b, lv, u), gen.fact(b, c, lv, v));
      const auto& rhs = gen.fact(a, c, lv, x.compose(a, b, c, lv, u, v));
      if (lhs != rhs) {
        pres.relations.push_back({Word{lv, shifted(lhs, base[i])}, Word{lv, shifted(rhs, base[i])}});
      }
    });
  }
  for (const auto& arrow : diagram.arrows) {
    Generators& src = gens[arrow.source];
    Generators& tgt = gens[arrow.target];
    const Flow& x = diagram.nodes[arrow.source];
    for (const auto& p : src.pairs()) {
      for (int lv = 0; lv <= cap; ++lv) {
        for (SimplexId s = 0; s < p.space.size(lv); ++s) {
          if (p.space.is_degenerate(lv, s)) continue;
          const SimplexId z = p.node[lv][s];
          const SimplexId mz = arrow.map.on(x, p.a, p.b)(lv, z);
          const auto lhs = shifted(src.fact(p.a, p.b, lv, z), base[arrow.source]);
          const auto rhs = shifted(
              tgt.fact(arrow.map.states[p.a], arrow.map.states[p.b], lv, mz), base[arrow.target]);
          if (lhs != rhs) pres.relations.push_back({Word{lv, lhs}, Word{lv, rhs}});
        }
      }
    }
  }

  out.saturation = saturate(pres, budget);
  out.flow = out.saturation.flow;
  for (std::size_t i = 0; i < diagram.nodes.size(); ++i) {
    const Flow& x = diagram.nodes[i];
    const std::size_t n = x.state_count();
    FlowMorphism inj;
    inj.states = state_map[i];
    inj.paths.resize(n * n);
    for (const auto& p : gens[i].pairs()) {
      SimplicialMap m;
      m.levels.resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        for (SimplexId z = 0; z < x.path(p.a, p.b).size(lv); ++z) {
          const Word w{lv, shifted(gens[i].fact(p.a, p.b, lv, z), base[i])};
          m.levels[lv].push_back(*out.saturation.class_of(w));
        }
      }
      inj.paths[p.a * n + p.b] = std::move(m);
    }
    out.injections.push_back(std::move(inj));
  }
  return out;
}

FlowMorphism mediate(const Colimit& c, const Flow& target, const std::vector<FlowMorphism>& cocone) {
  const Flow& x = c.flow;
  const std::size_t n = x.state_count();
  FlowMorphism out;
  for (const auto& [node, s] : c.state_origin) out.states.push_back(cocone.at(node).states[s]);
  out.paths.resize(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!x.has_paths(a, b)) continue;
      SimplicialMap m;
      m.levels.resize(x.cap() + 1);
      for (int lv = 0; lv <= x.cap(); ++lv) {
        for (SimplexId cls = 0; cls < x.path(a, b).size(lv); ++cls) {
          const Word& w = c.saturation.representative(a, b, lv, cls);
          SimplexId acc = kNoSimplex;
          StateId start = 0, at = 0;
          for (const Letter& l : w.letters) {
            const auto& origin = c.origins[l.block];
            const FlowMorphism& f = cocone.at(origin.node);
            const auto& source_flow_states = f.states;
            const StateId fa = source_flow_states[origin.source];
            const StateId fb = source_flow_states[origin.target];
            const std::size_t node_states = f.states.size();
            const SimplexId v =
                f.paths[origin.source * node_states + origin.target](lv, origin.simplex[lv][l.simplex]);
            if (acc == kNoSimplex) {
              acc = v;
              start = fa;
            } else {
              acc = target.compose(start, at, fb, lv, acc, v);
            }
            at = fb;
          }
          m.levels[lv].push_back(acc);
        }
      }
      out.paths[a * n + b] = std::move(m);
    }
  }
  return out;
}

Colimit pushout(const Flow& a, const Flow& b, const FlowMorphism& f, const Flow& c,
                const FlowMorphism& g, std::size_t budget) {
  FlowDiagram d;
  d.add_node(b);
  d.add_node(c);
  d.add_node(a);
  d.add_arrow(2, 0, f);
  d.add_arrow(2, 1, g);
  return colimit(d, budget);
}

// ---------------------------------------------------------------------------
// Tensor and cylinder

Tensor tensor(const SimplicialSet& u, const Flow& x, std::size_t budget) {
  if (u.cap() != x.cap()) fail(Errc::CapMismatch, "tensor factors have different caps");
  const int cap = x.cap();
  const std::size_t n = x.state_count();
  Generators gen(x);
  FlowPresentation pres;
  pres.states = x.states();
  pres.cap = cap;
  for (const auto& p : gen.pairs()) {
    pres.add_block(p.a, p.b, product(u, p.space), x.state_name(p.a) + "->" + x.state_name(p.b));
  }
  auto pair_with = [&](SimplexId uu, int lv, const std::vector<Letter>& letters) {
    Word w{lv, {}};
    for (const Letter& l : letters) {
      w.letters.push_back({l.block, product_index(u, gen.pairs()[l.block].space, lv, uu, l.simplex)});
    }
    return w;
  };
  gen.for_each_composable([&](StateId a, StateId b, StateId c, int lv, SimplexId p, SimplexId q) {
    const auto lhs = concat(gen.fact(a, b, lv, p), gen.fact(b, c, lv, q));
    const auto& rhs = gen.fact(a, c, lv, x.compose(a, b, c, lv, p, q));
    if (lhs == rhs) return;
    for (SimplexId uu = 0; uu < u.size(lv); ++uu) {
      pres.relations.push_back({pair_with(uu, lv, lhs), pair_with(uu, lv, rhs)});
    }
  });
  const Saturation sat = saturate(pres, budget);
  Tensor out;
  out.flow = sat.flow;
  out.embedding.resize(n * n);
  out.x_sizes.resize(n * n);
  for (const auto& p : gen.pairs()) {
    const std::size_t pair = p.a * n + p.b;
    out.embedding[pair].resize(cap + 1);
    out.x_sizes[pair].resize(cap + 1);
    for (int lv = 0; lv <= cap; ++lv) {
      const std::size_t size = x.path(p.a, p.b).size(lv);
      out.x_sizes[pair][lv] = size;
      for (SimplexId uu = 0; uu < u.size(lv); ++uu) {
        for (SimplexId z = 0; z < size; ++z) {
          out.embedding[pair][lv].push_back(*sat.class_of(pair_with(uu, lv, gen.fact(p.a, p.b, lv, z))));
        }
      }
    }
  }
  return out;
}

namespace {

FlowMorphism end_inclusion(const Tensor& t, const Flow& a, const SimplicialSet& interval,
                           SimplexId vertex) {
  const std::size_t n = a.state_count();
  FlowMorphism f;
  for (StateId s = 0; s < n; ++s) f.states.push_back(s);
  f.paths.resize(n * n);
  for (StateId p = 0; p < n; ++p) {
    for (StateId q = 0; q < n; ++q) {
      if (!a.has_paths(p, q)) continue;
      SimplicialMap m;
      m.levels.resize(a.cap() + 1);
      for (int lv = 0; lv <= a.cap(); ++lv) {
        const SimplexId uu = interval.lift(0, lv, vertex);
        for (SimplexId z = 0; z < a.path(p, q).size(lv); ++z) {
          m.levels[lv].push_back(t.embed(p, q, lv, uu, z));
        }
      }
      f.paths[p * n + q] = std::move(m);
    }
  }
  return f;
}

}  // namespace

MappingCylinder mapping_cylinder(const Flow& a, const FlowMorphism& i, const Flow& x,
                                 std::size_t budget) {
  const SimplicialSet interval = standard_simplex(1, a.cap());
  const Tensor t = tensor(interval, a, budget);
  const FlowMorphism zero = end_inclusion(t, a, interval, 0);
  const FlowMorphism one = end_inclusion(t, a, interval, 1);
  FlowDiagram d;
  d.add_node(x);
  d.add_node(t.flow);
  d.add_node(a);
  d.add_arrow(2, 1, zero);
  d.add_arrow(2, 0, i);
  const Colimit c = colimit(d, budget);
  MappingCylinder out;
  out.flow = c.flow;
  out.from_target = c.injections[0];
  out.end_zero = compose(c.injections[1], zero, a);
  out.end_one = compose(c.injections[1], one, a);
  return out;
}

// ---------------------------------------------------------------------------
// Sequential colimits

SequentialColimit sequential_colimit(const std::vector<Flow>& chain,
                                     const std::vector<FlowMorphism>& links) {
  if (chain.empty()) fail(Errc::MalformedFlow, "empty chain");
  if (links.size() + 1 != chain.size()) fail(Errc::MalformedFlow, "chain needs one link per step");
  const int cap = chain.front().cap();
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Flow& src = chain[k];
    const Flow& tgt = chain[k + 1];
    std::string why;
    if (!is_morphism(links[k], src, tgt, &why)) {
      fail(Errc::MalformedFlow, "link " + std::to_string(k) + ": " + why);
    }
    std::set<StateId> seen(links[k].states.begin(), links[k].states.end());
    if (seen.size() != links[k].states.size()) {
      fail(Errc::NotAnInclusion, "link " + std::to_string(k) + " identifies states");
    }
    for (StateId a = 0; a < src.state_count(); ++a) {
      for (StateId b = 0; b < src.state_count(); ++b) {
        if (!src.has_paths(a, b)) continue;
        for (int lv = 0; lv <= cap; ++lv) {
          const auto& level = links[k].on(src, a, b).levels[lv];
          if (std::set<SimplexId>(level.begin(), level.end()).size() != level.size()) {
            fail(Errc::NotAnInclusion, "link " + std::to_string(k) + " identifies paths " +
                                           src.state_name(a) + " -> " + src.state_name(b) +
                                           " at level " + std::to_string(lv));
          }
        }
      }
    }
  }

  // States: union-find over the disjoint union, numbered by first appearance.
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const auto& z : chain) {
    offset.push_back(total);
    total += z.state_count();
  }
  detail::UnionFind uf(total);
  for (std::size_t k = 0; k < links.size(); ++k) {
    for (StateId s = 0; s < chain[k].state_count(); ++s) {
      uf.unite(offset[k] + s, offset[k + 1] + links[k].states[s]);
    }
  }
  const std::size_t last = chain.size() - 1;
  const Flow& top = chain[last];
  std::vector<StateId> cls(total, kNoSimplex);
  std::vector<StateId> top_state;  // colimit state -> state of the last flow
  std::vector<std::string> names;
  std::vector<std::vector<StateId>> state_map(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    for (StateId s = 0; s < chain[k].state_count(); ++s) {
      const std::size_t root = uf.find(offset[k] + s);
      if (cls[root] == kNoSimplex) {
        cls[root] = names.size();
        names.push_back(chain[k].state_name(s));
        StateId t = s;
        for (std::size_t j = k; j < last; ++j) t = links[j].states[t];
        top_state.push_back(t);
      }
      state_map[k].push_back(cls[root]);
    }
  }

  // Paths: every simplex has a unique image in the last flow; classes are
  // numbered by first appearance along the chain.
  const std::size_t n = names.size();
  SequentialColimit out;
  out.flow = Flow(names, cap);
  std::vector<std::vector<std::vector<SimplexId>>> top_to_class(n * n);
  std::vector<std::vector<std::vector<SimplexId>>> class_to_top(n * n);
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      top_to_class[a * n + b].resize(cap + 1);
      class_to_top[a * n + b].resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        top_to_class[a * n + b][lv].assign(top.path(top_state[a], top_state[b]).size(lv), kNoSimplex);
      }
    }
  }
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Flow& z = chain[k];
    for (StateId a = 0; a < z.state_count(); ++a) {
      for (StateId b = 0; b < z.state_count(); ++b) {
        if (!z.has_paths(a, b)) continue;
        const std::size_t pair = state_map[k][a] * n + state_map[k][b];
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId s = 0; s < z.path(a, b).size(lv); ++s) {
            SimplexId t = s;
            StateId ta = a, tb = b;
            for (std::size_t j = k; j < last; ++j) {
              t = links[j].on(chain[j], ta, tb)(lv, t);
              ta = links[j].states[ta];
              tb = links[j].states[tb];
            }
            auto& slot = top_to_class[pair][lv][t];
            if (slot == kNoSimplex) {
              slot = class_to_top[pair][lv].size();
              class_to_top[pair][lv].push_back(t);
            }
          }
        }
      }
    }
  }
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      const std::size_t pair = a * n + b;
      if (class_to_top[pair][0].empty()) continue;
      const SimplicialSet& p = top.path(top_state[a], top_state[b]);
      std::vector<std::size_t> sizes(cap + 1);
      std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        const auto& reps = class_to_top[pair][lv];
        sizes[lv] = reps.size();
        for (int i = 0; lv > 0 && i <= lv; ++i) {
          faces[lv].emplace_back();
          for (SimplexId t : reps) faces[lv].back().push_back(top_to_class[pair][lv - 1][p.face(lv, i, t)]);
        }
        for (int i = 0; lv < cap && i <= lv; ++i) {
          degens[lv].emplace_back();
          for (SimplexId t : reps) {
            degens[lv].back().push_back(top_to_class[pair][lv + 1][p.degeneracy(lv, i, t)]);
          }
        }
      }
      out.flow.set_path(a, b, SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces),
                                                        std::move(degens)));
    }
  }
  for (StateId a = 0; a < n; ++a) {
    for (StateId b = 0; b < n; ++b) {
      if (!out.flow.has_paths(a, b)) continue;
      for (StateId c = 0; c < n; ++c) {
        if (!out.flow.has_paths(b, c)) continue;
        Flow::CompositionTable table(cap + 1);
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId x : class_to_top[a * n + b][lv]) {
            for (SimplexId y : class_to_top[b * n + c][lv]) {
              const SimplexId t =
                  top.compose(top_state[a], top_state[b], top_state[c], lv, x, y);
              table[lv].push_back(top_to_class[a * n + c][lv][t]);
            }
          }
        }
        out.flow.set_composition(a, b, c, std::move(table));
      }
    }
  }
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Flow& z = chain[k];
    const std::size_t m = z.state_count();
    FlowMorphism inj;
    inj.states = state_map[k];
    inj.paths.resize(m * m);
    for (StateId a = 0; a < m; ++a) {
      for (StateId b = 0; b < m; ++b) {
        if (!z.has_paths(a, b)) continue;
        const std::size_t pair = state_map[k][a] * n + state_map[k][b];
        SimplicialMap map;
        map.levels.resize(cap + 1);
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId s = 0; s < z.path(a, b).size(lv); ++s) {
            SimplexId t = s;
            StateId ta = a, tb = b;
            for (std::size_t j = k; j < last; ++j) {
              t = links[j].on(chain[j], ta, tb)(lv, t);
              ta = links[j].states[ta];
              tb = links[j].states[tb];
            }
            map.levels[lv].push_back(top_to_class[pair][lv][t]);
          }
        }
        inj.paths[a * m + b] = std::move(map);
      }
    }
    out.injections.push_back(std::move(inj));
  }
  return out;
}

}  // namespace flowcalc
