#include "flowcalc/isomorphism.hpp"

#include <algorithm>
#include <boost/container_hash/hash.hpp>
#include <functional>

#include "flowcalc/error.hpp"

namespace flowcalc {

namespace {

struct Split {
  StateId mid;
  SimplexId left;
  SimplexId right;
};

/// Precomputed structure of one flow: pair ordinals, longest-chain distance,
/// degeneracy preimages, factorisations and (for isomorphism pruning)
/// simplex signatures.
struct Layout {
  const Flow& x;
  std::size_t n;
  std::vector<std::size_t> ordinal;  // a * n + b -> pair ordinal or npos
  std::vector<std::pair<StateId, StateId>> pairs;
  std::vector<int> distance;  // per ordinal
  // [ordinal][level][simplex]
  std::vector<std::vector<std::vector<std::vector<std::pair<int, SimplexId>>>>> preimages;
  std::vector<std::vector<std::vector<std::vector<Split>>>> splits;
  std::vector<std::vector<std::vector<std::size_t>>> signature;
  std::vector<std::size_t> state_signature;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit Layout(const Flow& flow) : x(flow), n(flow.state_count()) {
    const int cap = x.cap();
    for (StateId a = 0; a < n; ++a) {
      if (x.has_paths(a, a)) fail(Errc::NotLoopless, "state " + x.state_name(a) + " has a loop");
    }
    ordinal.assign(n * n, npos);
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        if (!x.has_paths(a, b)) continue;
        ordinal[a * n + b] = pairs.size();
        pairs.emplace_back(a, b);
      }
    }
    // Longest chain of nonempty pairs, by relaxation (the graph is acyclic).
    std::vector<int> dist(n * n, 0);
    for (auto [a, b] : pairs) dist[a * n + b] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (auto [a, b] : pairs) {
        for (StateId c = 0; c < n; ++c) {
          if (!x.has_paths(b, c)) continue;
          if (dist[a * n + c] < dist[a * n + b] + dist[b * n + c]) {
            dist[a * n + c] = dist[a * n + b] + dist[b * n + c];
            changed = true;
          }
        }
      }
    }
    for (auto [a, b] : pairs) distance.push_back(dist[a * n + b]);

    preimages.resize(pairs.size());
    splits.resize(pairs.size());
    signature.resize(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& p = x.path(pairs[k].first, pairs[k].second);
      preimages[k].resize(cap + 1);
      splits[k].resize(cap + 1);
      signature[k].resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        preimages[k][lv].resize(p.size(lv));
        splits[k][lv].resize(p.size(lv));
        signature[k][lv].resize(p.size(lv));
      }
      for (int lv = 0; lv < cap; ++lv) {
        for (SimplexId w = 0; w < p.size(lv); ++w) {
          for (int i = 0; i <= lv; ++i) preimages[k][lv + 1][p.degeneracy(lv, i, w)].emplace_back(i, w);
        }
      }
    }
    std::vector<std::vector<std::vector<std::size_t>>> left(pairs.size()), right(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& p = x.path(pairs[k].first, pairs[k].second);
      left[k].resize(cap + 1);
      right[k].resize(cap + 1);
      for (int lv = 0; lv <= cap; ++lv) {
        left[k][lv].assign(p.size(lv), 0);
        right[k][lv].assign(p.size(lv), 0);
      }
    }
    for (auto [a, b] : pairs) {
      for (StateId c = 0; c < n; ++c) {
        if (!x.has_paths(b, c)) continue;
        const std::size_t kab = ordinal[a * n + b], kbc = ordinal[b * n + c], kac = ordinal[a * n + c];
        for (int lv = 0; lv <= cap; ++lv) {
          for (SimplexId u = 0; u < x.path(a, b).size(lv); ++u) {
            for (SimplexId v = 0; v < x.path(b, c).size(lv); ++v) {
              splits[kac][lv][x.compose(a, b, c, lv, u, v)].push_back({b, u, v});
              ++left[kab][lv][u];
              ++right[kbc][lv][v];
            }
          }
        }
      }
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto& p = x.path(pairs[k].first, pairs[k].second);
      for (int lv = 0; lv <= cap; ++lv) {
        for (SimplexId z = 0; z < p.size(lv); ++z) {
          std::size_t h = 0;
          boost::hash_combine(h, lv);
          boost::hash_combine(h, p.degeneracy_mask(lv, z));
          boost::hash_combine(h, splits[k][lv][z].size());
          boost::hash_combine(h, left[k][lv][z]);
          boost::hash_combine(h, right[k][lv][z]);
          for (int i = 0; lv > 0 && i <= lv; ++i) {
            boost::hash_combine(h, signature[k][lv - 1][p.face(lv, i, z)]);
          }
          signature[k][lv][z] = h;
        }
      }
    }
    state_signature.assign(n, 0);
    for (StateId s = 0; s < n; ++s) {
      std::vector<std::size_t> out_sizes, in_sizes;
      for (StateId t = 0; t < n; ++t) {
        if (x.has_paths(s, t)) out_sizes.push_back(x.path(s, t).total_size());
        if (x.has_paths(t, s)) in_sizes.push_back(x.path(t, s).total_size());
      }
      std::sort(out_sizes.begin(), out_sizes.end());
      std::sort(in_sizes.begin(), in_sizes.end());
      std::size_t h = 0;
      boost::hash_combine(h, out_sizes);
      boost::hash_combine(h, in_sizes);
      state_signature[s] = h;
    }
  }
};

class Search {
 public:
  Search(const Flow& x, const Flow& y, bool iso, std::function<bool(const FlowMorphism&)> emit)
      : lx_(x), ly_(y), iso_(iso), emit_(std::move(emit)) {
    // Items: level ascending, pairs by distance, simplices ascending.
    std::vector<std::size_t> order(lx_.pairs.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
      return lx_.distance[p] < lx_.distance[q];
    });
    for (int lv = 0; lv <= x.cap(); ++lv) {
      for (std::size_t k : order) {
        const auto& [a, b] = lx_.pairs[k];
        for (SimplexId z = 0; z < x.path(a, b).size(lv); ++z) items_.push_back({k, lv, z});
      }
    }
    value_.resize(lx_.pairs.size());
    for (std::size_t k = 0; k < lx_.pairs.size(); ++k) {
      value_[k].resize(x.cap() + 1);
      for (int lv = 0; lv <= x.cap(); ++lv) {
        value_[k][lv].assign(x.path(lx_.pairs[k].first, lx_.pairs[k].second).size(lv), kNoSimplex);
      }
    }
  }

  void run() {
    const Flow& x = lx_.x;
    const Flow& y = ly_.x;
    if (x.cap() != y.cap()) return;
    if (iso_) {
      if (x.state_count() != y.state_count() || lx_.pairs.size() != ly_.pairs.size()) return;
    }
    states_.assign(x.state_count(), 0);
    taken_.assign(y.state_count(), 0);
    assign_state(0);
  }

 private:
  struct Item {
    std::size_t pair;
    int level;
    SimplexId z;
  };

  bool pair_ok(StateId a, StateId b) const {
    const Flow& x = lx_.x;
    const Flow& y = ly_.x;
    const StateId fa = states_[a], fb = states_[b];
    if (!x.has_paths(a, b)) return !iso_ || !y.has_paths(fa, fb);
    if (!y.has_paths(fa, fb)) return false;
    if (iso_) {
      for (int lv = 0; lv <= x.cap(); ++lv) {
        if (x.path(a, b).size(lv) != y.path(fa, fb).size(lv)) return false;
      }
    }
    return true;
  }

  void assign_state(StateId s) {
    if (stop_) return;
    const Flow& x = lx_.x;
    const Flow& y = ly_.x;
    if (s == x.state_count()) {
      assign_simplices();
      return;
    }
    for (StateId t = 0; t < y.state_count() && !stop_; ++t) {
      if (iso_ && (taken_[t] || lx_.state_signature[s] != ly_.state_signature[t])) continue;
      states_[s] = t;
      bool ok = true;
      for (StateId r = 0; r <= s && ok; ++r) ok = pair_ok(r, s) && pair_ok(s, r);
      if (!ok) continue;
      taken_[t] = 1;
      assign_state(s + 1);
      taken_[t] = 0;
    }
  }

  std::size_t target_ordinal(std::size_t k) const {
    const auto [a, b] = lx_.pairs[k];
    return ly_.ordinal[states_[a] * ly_.n + states_[b]];
  }

  bool fits(const Item& it, SimplexId v) const {
    const Flow& x = lx_.x;
    const Flow& y = ly_.x;
    const auto [a, b] = lx_.pairs[it.pair];
    const int lv = it.level;
    const SimplicialSet& p = x.path(a, b);
    const SimplicialSet& q = y.path(states_[a], states_[b]);
    const std::size_t tk = target_ordinal(it.pair);
    if (iso_) {
      if (used_[tk][lv][v]) return false;
      if (p.degeneracy_mask(lv, it.z) != q.degeneracy_mask(lv, v)) return false;
      if (lx_.signature[it.pair][lv][it.z] != ly_.signature[tk][lv][v]) return false;
    }
    for (int i = 0; lv > 0 && i <= lv; ++i) {
      if (q.face(lv, i, v) != value_[it.pair][lv - 1][p.face(lv, i, it.z)]) return false;
    }
    for (const auto& [i, w] : lx_.preimages[it.pair][lv][it.z]) {
      if (q.degeneracy(lv - 1, i, value_[it.pair][lv - 1][w]) != v) return false;
    }
    for (const Split& s : lx_.splits[it.pair][lv][it.z]) {
      const SimplexId l = value_[lx_.ordinal[a * lx_.n + s.mid]][lv][s.left];
      const SimplexId r = value_[lx_.ordinal[s.mid * lx_.n + b]][lv][s.right];
      if (y.compose(states_[a], states_[s.mid], states_[b], lv, l, r) != v) return false;
    }
    return true;
  }

  std::vector<SimplexId> candidates(const Item& it) const {
    const Flow& x = lx_.x;
    const Flow& y = ly_.x;
    const auto [a, b] = lx_.pairs[it.pair];
    const int lv = it.level;
    const SimplicialSet& q = y.path(states_[a], states_[b]);
    std::optional<SimplexId> forced;
    if (!lx_.preimages[it.pair][lv][it.z].empty()) {
      const auto [i, w] = lx_.preimages[it.pair][lv][it.z].front();
      forced = q.degeneracy(lv - 1, i, value_[it.pair][lv - 1][w]);
    } else if (!lx_.splits[it.pair][lv][it.z].empty()) {
      const Split& s = lx_.splits[it.pair][lv][it.z].front();
      forced = y.compose(states_[a], states_[s.mid], states_[b], lv,
                         value_[lx_.ordinal[a * lx_.n + s.mid]][lv][s.left],
                         value_[lx_.ordinal[s.mid * lx_.n + b]][lv][s.right]);
    }
    std::vector<SimplexId> out;
    if (forced) {
      if (fits(it, *forced)) out.push_back(*forced);
      return out;
    }
    (void)x;
    for (SimplexId v = 0; v < q.size(lv); ++v) {
      if (fits(it, v)) out.push_back(v);
    }
    return out;
  }

  void set(const Item& it, SimplexId v, bool on) {
    value_[it.pair][it.level][it.z] = on ? v : kNoSimplex;
    if (iso_) used_[target_ordinal(it.pair)][it.level][v] = on;
  }

  void assign_simplices() {
    const Flow& y = ly_.x;
    if (iso_) {
      used_.assign(ly_.pairs.size(), {});
      for (std::size_t k = 0; k < ly_.pairs.size(); ++k) {
        used_[k].resize(y.cap() + 1);
        for (int lv = 0; lv <= y.cap(); ++lv) {
          used_[k][lv].assign(y.path(ly_.pairs[k].first, ly_.pairs[k].second).size(lv), 0);
        }
      }
    }
    if (items_.empty()) {
      stop_ = !emit_(current());
      return;
    }
    struct Frame {
      std::vector<SimplexId> cands;
      std::size_t next = 0;
      SimplexId current = kNoSimplex;
    };
    std::vector<Frame> frames;
    frames.reserve(items_.size());
    frames.push_back({candidates(items_[0]), 0, kNoSimplex});
    while (!frames.empty()) {
      const std::size_t pos = frames.size() - 1;
      Frame& f = frames.back();
      if (f.current != kNoSimplex) {
        set(items_[pos], f.current, false);
        f.current = kNoSimplex;
      }
      if (f.next == f.cands.size()) {
        frames.pop_back();
        continue;
      }
      f.current = f.cands[f.next++];
      set(items_[pos], f.current, true);
      if (frames.size() == items_.size()) {
        if (!emit_(current())) {
          stop_ = true;
          return;
        }
        continue;
      }
      frames.push_back({candidates(items_[pos + 1]), 0, kNoSimplex});
    }
  }

  FlowMorphism current() const {
    const Flow& x = lx_.x;
    FlowMorphism f;
    f.states = states_;
    f.paths.resize(lx_.n * lx_.n);
    for (std::size_t k = 0; k < lx_.pairs.size(); ++k) {
      const auto [a, b] = lx_.pairs[k];
      f.paths[a * lx_.n + b].levels = value_[k];
    }
    (void)x;
    return f;
  }

  Layout lx_;
  Layout ly_;
  bool iso_;
  std::function<bool(const FlowMorphism&)> emit_;
  std::vector<Item> items_;
  std::vector<StateId> states_;
  std::vector<char> taken_;
  std::vector<std::vector<std::vector<SimplexId>>> value_;
  std::vector<std::vector<std::vector<char>>> used_;
  bool stop_ = false;
};

}  // namespace

std::optional<FlowMorphism> find_isomorphism(const Flow& x, const Flow& y) {
  std::optional<FlowMorphism> found;
  Search search(x, y, true, [&](const FlowMorphism& f) {
    found = f;
    return false;
  });
  search.run();
  return found;
}

std::vector<FlowMorphism> enumerate_morphisms(const Flow& x, const Flow& y, std::size_t limit) {
  std::vector<FlowMorphism> out;
  if (limit == 0) return out;
  Search search(x, y, false, [&](const FlowMorphism& f) {
    out.push_back(f);
    return out.size() < limit;
  });
  search.run();
  return out;
}

std::optional<SimplicialMap> find_isomorphism(const SimplicialSet& a, const SimplicialSet& b) {
  if (a.cap() != b.cap()) return std::nullopt;
  if (a.empty() || b.empty()) {
    if (!(a.empty() && b.empty())) return std::nullopt;
    SimplicialMap m;
    m.levels.resize(a.cap() + 1);
    return m;
  }
  const auto f = find_isomorphism(glob(a), glob(b));
  if (!f) return std::nullopt;
  return f->paths[0 * 2 + 1];
}

}  // namespace flowcalc
