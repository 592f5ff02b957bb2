#include "flowcalc/poset.hpp"

#include <algorithm>
#include <map>

#include "flowcalc/error.hpp"

namespace flowcalc {

Poset Poset::from_relations(std::vector<std::string> names,
                            const std::vector<std::pair<Element, Element>>& less_pairs) {
  Poset p;
  const std::size_t n = names.size();
  p.names_ = std::move(names);
  p.less_.assign(n * n, 0);
  std::vector<std::vector<Element>> succ(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [a, b] : less_pairs) {
    if (a >= n || b >= n) fail(Errc::PartialOrderViolation, "relation names an unknown element");
    if (a == b) {
      fail(Errc::PartialOrderViolation, "element " + p.names_[a] + " is strictly below itself");
    }
    succ[a].push_back(b);
    ++indegree[b];
  }
  // Kahn's algorithm; leftover elements sit on a cycle.
  std::vector<Element> ready;
  for (Element e = n; e-- > 0;) {
    if (indegree[e] == 0) ready.push_back(e);
  }
  while (!ready.empty()) {
    const Element e = ready.back();
    ready.pop_back();
    p.topo_.push_back(e);
    for (Element s : succ[e]) {
      if (--indegree[s] == 0) ready.push_back(s);
    }
  }
  if (p.topo_.size() != n) {
    std::string cycle;
    for (Element e = 0; e < n; ++e) {
      if (indegree[e] != 0) cycle += (cycle.empty() ? "" : ", ") + p.names_[e];
    }
    fail(Errc::PartialOrderViolation, "cycle through {" + cycle + "}");
  }
  // Transitive closure in reverse topological order.
  for (auto it = p.topo_.rbegin(); it != p.topo_.rend(); ++it) {
    const Element a = *it;
    for (Element b : succ[a]) {
      p.less_[a * n + b] = 1;
      for (Element c = 0; c < n; ++c) {
        if (p.less_[b * n + c]) p.less_[a * n + c] = 1;
      }
    }
  }
  return p;
}

std::optional<Element> Poset::find(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<Element>(it - names_.begin());
}

bool Poset::covers(Element a, Element b) const {
  if (!less(a, b)) return false;
  for (Element c = 0; c < size(); ++c) {
    if (less(a, c) && less(c, b)) return false;
  }
  return true;
}

std::vector<std::pair<Element, Element>> Poset::covering_relations() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element a = 0; a < size(); ++a) {
    for (Element b = 0; b < size(); ++b) {
      if (covers(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<std::pair<Element, Element>> Poset::strict_pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element a = 0; a < size(); ++a) {
    for (Element b = 0; b < size(); ++b) {
      if (less(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<Element> Poset::interval(Element a, Element b) const {
  std::vector<Element> out;
  for (Element e : topo_) {
    if (leq(a, e) && leq(e, b)) out.push_back(e);
  }
  return out;
}

std::optional<Element> Poset::bottom() const {
  for (Element a = 0; a < size(); ++a) {
    bool below_all = true;
    for (Element b = 0; b < size() && below_all; ++b) below_all = leq(a, b);
    if (below_all) return a;
  }
  return std::nullopt;
}

std::optional<Element> Poset::top() const {
  for (Element a = 0; a < size(); ++a) {
    bool above_all = true;
    for (Element b = 0; b < size() && above_all; ++b) above_all = leq(b, a);
    if (above_all) return a;
  }
  return std::nullopt;
}

bool Poset::bounded() const {
  const auto lo = bottom();
  const auto hi = top();
  return lo && hi && *lo != *hi;
}

PosetReport validate_poset(const Poset& poset) {
  if (poset.size() == 0) fail(Errc::PartialOrderViolation, "poset has no elements");
  PosetReport r;
  r.bottom = poset.bottom();
  r.top = poset.top();
  r.bounded = poset.bounded();
  r.locally_finite = true;
  return r;
}

int chain_length(const Poset& poset, Element a, Element b) {
  if (!poset.less(a, b)) {
    fail(Errc::NotComparable, poset.name(a) + " is not strictly below " + poset.name(b));
  }
  // longest[e] = longest chain from a to e, over covering edges.
  std::vector<int> longest(poset.size(), -1);
  longest[a] = 0;
  for (Element e : poset.topological_order()) {
    if (longest[e] < 0) continue;
    for (Element f = 0; f < poset.size(); ++f) {
      if (poset.covers(e, f) && poset.leq(f, b)) longest[f] = std::max(longest[f], longest[e] + 1);
    }
  }
  return longest[b];
}

SimplicialSet order_complex(const Poset& poset, int cap) {
  SimplicialSetBuilder builder;
  std::map<std::vector<Element>, std::size_t> cell_of;
  // Chains grow one element at a time, appended above their current maximum
  // in linear-extension order so faces are always registered first.
  std::vector<std::vector<Element>> frontier;
  for (Element e : poset.topological_order()) {
    cell_of[{e}] = builder.add_vertex(poset.name(e));
    frontier.push_back({e});
  }
  for (int dim = 1; dim <= cap && !frontier.empty(); ++dim) {
    std::vector<std::vector<Element>> next;
    for (const auto& chain : frontier) {
      for (Element e : poset.topological_order()) {
        if (!poset.less(chain.back(), e)) continue;
        std::vector<Element> longer = chain;
        longer.push_back(e);
        std::vector<CellSimplex> faces;
        for (int i = 0; i <= dim; ++i) {
          std::vector<Element> f = longer;
          f.erase(f.begin() + i);
          faces.push_back(SimplicialSetBuilder::nondegenerate(cell_of.at(f), dim - 1));
        }
        cell_of[longer] = builder.add_cell(dim, std::move(faces));
        next.push_back(std::move(longer));
      }
    }
    frontier = std::move(next);
  }
  return builder.build(cap);
}

std::optional<std::size_t> ExtCategory::find(const ExtSimplex& s) const {
  const auto it = std::find(objects.begin(), objects.end(), s);
  if (it == objects.end()) return std::nullopt;
  return static_cast<std::size_t>(it - objects.begin());
}

std::size_t ExtCategory::apply(std::size_t obj, std::size_t index) const {
  ExtSimplex s = objects.at(obj);
  s.erase(s.begin() + static_cast<std::ptrdiff_t>(index));
  return *find(s);
}

ExtCategory ext_category(const Poset& poset) {
  if (!poset.bounded()) fail(Errc::NotBounded, "poset needs distinct bottom and top elements");
  const Element lo = *poset.bottom();
  const Element hi = *poset.top();
  ExtCategory cat;
  // Enumerate chains from lo to hi, longest first.
  std::vector<ExtSimplex> chains;
  std::vector<Element> current{lo};
  auto extend = [&](auto&& self) -> void {
    const Element last = current.back();
    if (last == hi) {
      chains.push_back(current);
      return;
    }
    for (Element e : poset.topological_order()) {
      if (poset.less(last, e)) {
        current.push_back(e);
        self(self);
        current.pop_back();
      }
    }
  };
  extend(extend);
  std::stable_sort(chains.begin(), chains.end(),
                   [](const ExtSimplex& a, const ExtSimplex& b) { return a.size() > b.size(); });
  cat.objects = std::move(chains);
  for (const auto& s : cat.objects) {
    long long d = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const long long l = chain_length(poset, s[i], s[i + 1]);
      d += l * l;
    }
    cat.degree.push_back(d);
  }
  for (std::size_t o = 0; o < cat.objects.size(); ++o) {
    const std::size_t p = cat.objects[o].size() - 1;
    for (std::size_t i = 1; i < p; ++i) cat.generators.push_back({o, cat.apply(o, i), i});
  }
  cat.terminal = *cat.find({lo, hi});
  return cat;
}

ReedyReport reedy_report(const Poset& poset) {
  const ExtCategory cat = ext_category(poset);
  ReedyReport report;
  for (const auto& arrow : cat.generators) {
    ++report.arrows_checked;
    if (cat.degree[arrow.target] <= cat.degree[arrow.source]) {
      report.violations.push_back({"degree", cat.objects[arrow.source], cat.degree[arrow.source],
                                   cat.degree[arrow.target]});
    }
  }
  for (Element a = 0; a < poset.size(); ++a) {
    for (Element b = 0; b < poset.size(); ++b) {
      if (!poset.less(a, b)) continue;
      for (Element c = 0; c < poset.size(); ++c) {
        if (!poset.less(b, c)) continue;
        ++report.triangles_checked;
        const long long lhs = chain_length(poset, a, b) + chain_length(poset, b, c);
        const long long rhs = chain_length(poset, a, c);
        if (lhs > rhs) report.violations.push_back({"triangle", {a, b, c}, lhs, rhs});
      }
    }
  }
  return report;
}

}  // namespace flowcalc
