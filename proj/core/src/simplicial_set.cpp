#include "flowcalc/simplicial_set.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "flowcalc/error.hpp"
#include "union_find.hpp"

namespace flowcalc {

namespace {

void check_cap(int cap) {
  if (cap < 0 || cap > kMaxCap) {
    fail(Errc::MalformedSimplicialSet, "truncation cap " + std::to_string(cap) + " out of range");
  }
}

std::string simplex_name(int level, SimplexId s) {
  return "level " + std::to_string(level) + " simplex " + std::to_string(s);
}

}  // namespace

SimplicialSet::SimplicialSet(int cap) : cap_(cap) {
  check_cap(cap);
  sizes_.assign(cap + 1, 0);
  faces_.resize(cap + 1);
  degens_.resize(cap + 1);
  masks_.resize(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    faces_[n].resize(n == 0 ? 0 : n + 1);
    degens_[n].resize(n < cap ? n + 1 : 0);
  }
}

SimplicialSet SimplicialSet::from_tables(
    int cap, std::vector<std::size_t> sizes,
    std::vector<std::vector<std::vector<SimplexId>>> faces,
    std::vector<std::vector<std::vector<SimplexId>>> degeneracies) {
  check_cap(cap);
  SimplicialSet out(cap);
  if (sizes.size() != static_cast<std::size_t>(cap + 1) || faces.size() != sizes.size() ||
      degeneracies.size() != sizes.size()) {
    fail(Errc::MalformedSimplicialSet, "table count does not match cap");
  }
  for (int n = 0; n <= cap; ++n) {
    const std::size_t face_count = n == 0 ? 0 : n + 1;
    const std::size_t degen_count = n < cap ? n + 1 : 0;
    if (faces[n].size() != face_count || degeneracies[n].size() != degen_count) {
      fail(Errc::MalformedSimplicialSet, "operator count wrong at level " + std::to_string(n));
    }
    for (const auto& table : faces[n]) {
      if (table.size() != sizes[n]) fail(Errc::MalformedSimplicialSet, "face table size");
      for (SimplexId t : table) {
        if (t >= sizes[n - 1]) fail(Errc::MalformedSimplicialSet, "face out of range");
      }
    }
    for (const auto& table : degeneracies[n]) {
      if (table.size() != sizes[n]) fail(Errc::MalformedSimplicialSet, "degeneracy table size");
      for (SimplexId t : table) {
        if (t >= sizes[n + 1]) fail(Errc::MalformedSimplicialSet, "degeneracy out of range");
      }
    }
  }
  out.sizes_ = std::move(sizes);
  out.faces_ = std::move(faces);
  out.degens_ = std::move(degeneracies);
  out.compute_masks();
  return out;
}

void SimplicialSet::compute_masks() {
  for (int n = 0; n <= cap_; ++n) masks_[n].assign(sizes_[n], 0);
  for (int n = 0; n < cap_; ++n) {
    for (int i = 0; i <= n; ++i) {
      for (SimplexId s = 0; s < sizes_[n]; ++s) {
        masks_[n + 1][degens_[n][i][s]] |= (1u << i);
      }
    }
  }
}

std::size_t SimplicialSet::total_size() const {
  return std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0});
}

std::vector<SimplexId> SimplicialSet::nondegenerate(int level) const {
  std::vector<SimplexId> out;
  for (SimplexId s = 0; s < sizes_[level]; ++s) {
    if (masks_[level][s] == 0) out.push_back(s);
  }
  return out;
}

std::size_t SimplicialSet::nondegenerate_count() const {
  std::size_t count = 0;
  for (int n = 0; n <= cap_; ++n) count += nondegenerate(n).size();
  return count;
}

SimplexId SimplicialSet::lift(int from, int to, SimplexId s) const {
  for (int n = from; n < to; ++n) s = degens_[n][0][s];
  return s;
}

SimplexId SimplicialSet::vertex(int level, SimplexId s, int i) const {
  int n = level;
  while (n > i) {
    s = faces_[n][n][s];
    --n;
  }
  while (n > 0) {
    s = faces_[n][0][s];
    --n;
  }
  return s;
}

std::vector<std::string> SimplicialSet::violations() const {
  std::vector<std::string> out;
  auto report = [&](int level, SimplexId s, const std::string& what) {
    out.push_back(simplex_name(level, s) + ": " + what);
  };
  for (int n = 0; n <= cap_; ++n) {
    for (SimplexId x = 0; x < sizes_[n]; ++x) {
      // d_i d_j = d_{j-1} d_i for i < j
      if (n >= 2) {
        for (int j = 1; j <= n; ++j) {
          for (int i = 0; i < j; ++i) {
            if (face(n - 1, i, face(n, j, x)) != face(n - 1, j - 1, face(n, i, x))) {
              report(n, x, "d" + std::to_string(i) + "d" + std::to_string(j) + " != d" +
                               std::to_string(j - 1) + "d" + std::to_string(i));
            }
          }
        }
      }
      if (n >= cap_) continue;
      for (int j = 0; j <= n; ++j) {
        const SimplexId sx = degeneracy(n, j, x);
        for (int i = 0; i <= n + 1; ++i) {
          const SimplexId lhs = face(n + 1, i, sx);
          SimplexId rhs;
          if (i == j || i == j + 1) {
            rhs = x;
          } else if (i < j) {
            rhs = degeneracy(n - 1, j - 1, face(n, i, x));
          } else {
            rhs = degeneracy(n - 1, j, face(n, i - 1, x));
          }
          if (lhs != rhs) {
            report(n, x, "d" + std::to_string(i) + "s" + std::to_string(j) + " identity fails");
          }
        }
        if (n + 2 <= cap_) {
          for (int i = 0; i <= j; ++i) {
            if (degeneracy(n + 1, i, sx) != degeneracy(n + 1, j + 1, degeneracy(n, i, x))) {
              report(n, x, "s" + std::to_string(i) + "s" + std::to_string(j) + " identity fails");
            }
          }
        }
      }
    }
  }
  return out;
}

std::pair<SimplicialSet, std::vector<std::vector<SimplexId>>> SimplicialSet::restrict_to(
    const std::vector<std::vector<char>>& keep) const {
  std::vector<std::vector<SimplexId>> index(cap_ + 1);
  std::vector<std::size_t> sizes(cap_ + 1, 0);
  for (int n = 0; n <= cap_; ++n) {
    index[n].assign(sizes_[n], kNoSimplex);
    for (SimplexId s = 0; s < sizes_[n]; ++s) {
      if (keep[n][s]) index[n][s] = static_cast<SimplexId>(sizes[n]++);
    }
  }
  std::vector<std::vector<std::vector<SimplexId>>> faces(cap_ + 1), degens(cap_ + 1);
  for (int n = 0; n <= cap_; ++n) {
    faces[n].assign(n == 0 ? 0 : n + 1, std::vector<SimplexId>(sizes[n]));
    degens[n].assign(n < cap_ ? n + 1 : 0, std::vector<SimplexId>(sizes[n]));
    for (SimplexId s = 0; s < sizes_[n]; ++s) {
      const SimplexId t = index[n][s];
      if (t == kNoSimplex) continue;
      for (std::size_t i = 0; i < faces[n].size(); ++i) {
        const SimplexId f = index[n - 1][faces_[n][i][s]];
        if (f == kNoSimplex) fail(Errc::MalformedSimplicialSet, "restriction not closed under faces");
        faces[n][i][t] = f;
      }
      for (std::size_t i = 0; i < degens[n].size(); ++i) {
        const SimplexId d = index[n + 1][degens_[n][i][s]];
        if (d == kNoSimplex) {
          fail(Errc::MalformedSimplicialSet, "restriction not closed under degeneracies");
        }
        degens[n][i][t] = d;
      }
    }
  }
  return {from_tables(cap_, std::move(sizes), std::move(faces), std::move(degens)),
          std::move(index)};
}

bool is_simplicial_map(const SimplicialMap& f, const SimplicialSet& source,
                       const SimplicialSet& target) {
  if (source.cap() != target.cap() || f.levels.size() != static_cast<std::size_t>(source.cap() + 1)) {
    return false;
  }
  const int cap = source.cap();
  for (int n = 0; n <= cap; ++n) {
    if (f.levels[n].size() != source.size(n)) return false;
    for (SimplexId s = 0; s < source.size(n); ++s) {
      if (f.levels[n][s] >= target.size(n)) return false;
    }
  }
  for (int n = 0; n <= cap; ++n) {
    for (SimplexId s = 0; s < source.size(n); ++s) {
      const SimplexId fs = f.levels[n][s];
      for (int i = 0; n > 0 && i <= n; ++i) {
        if (f.levels[n - 1][source.face(n, i, s)] != target.face(n, i, fs)) return false;
      }
      for (int i = 0; n < cap && i <= n; ++i) {
        if (f.levels[n + 1][source.degeneracy(n, i, s)] != target.degeneracy(n, i, fs)) return false;
      }
    }
  }
  return true;
}

SimplicialMap identity_map(const SimplicialSet& a) {
  SimplicialMap f;
  f.levels.resize(a.cap() + 1);
  for (int n = 0; n <= a.cap(); ++n) {
    f.levels[n].resize(a.size(n));
    std::iota(f.levels[n].begin(), f.levels[n].end(), SimplexId{0});
  }
  return f;
}

SimplicialMap compose(const SimplicialMap& second, const SimplicialMap& first) {
  SimplicialMap out;
  out.levels.resize(first.levels.size());
  for (std::size_t n = 0; n < first.levels.size(); ++n) {
    out.levels[n].reserve(first.levels[n].size());
    for (SimplexId s : first.levels[n]) out.levels[n].push_back(second.levels[n][s]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builder

std::size_t SimplicialSetBuilder::add_vertex(std::string label) {
  cells_.push_back({0, {}, std::move(label)});
  return cells_.size() - 1;
}

std::size_t SimplicialSetBuilder::add_cell(int dim, std::vector<CellSimplex> faces,
                                           std::string label) {
  if (dim < 0 || faces.size() != static_cast<std::size_t>(dim == 0 ? 0 : dim + 1)) {
    fail(Errc::ArityMismatch, "cell of dimension " + std::to_string(dim) + " needs " +
                                  std::to_string(dim == 0 ? 0 : dim + 1) + " faces");
  }
  for (const auto& f : faces) {
    if (f.cell >= cells_.size()) fail(Errc::DanglingReference, "face refers to a later cell");
    if (f.level() != dim - 1) fail(Errc::ArityMismatch, "face has the wrong level");
    const int target_dim = cells_[f.cell].dim;
    if (f.surjection.empty() || f.surjection.front() != 0 || f.surjection.back() != target_dim) {
      fail(Errc::ArityMismatch, "face is not in normal form");
    }
    for (std::size_t p = 1; p < f.surjection.size(); ++p) {
      const int step = f.surjection[p] - f.surjection[p - 1];
      if (step != 0 && step != 1) fail(Errc::ArityMismatch, "face is not in normal form");
    }
  }
  cells_.push_back({dim, std::move(faces), std::move(label)});
  return cells_.size() - 1;
}

CellSimplex SimplicialSetBuilder::nondegenerate(std::size_t cell, int dim) {
  CellSimplex s{cell, std::vector<int>(dim + 1)};
  std::iota(s.surjection.begin(), s.surjection.end(), 0);
  return s;
}

CellSimplex SimplicialSetBuilder::face(const CellSimplex& s, int i) const {
  std::vector<int> tau = s.surjection;
  tau.erase(tau.begin() + i);
  const int k = cells_[s.cell].dim;
  std::vector<char> hit(k + 1, 0);
  for (int v : tau) hit[v] = 1;
  const auto missing = std::find(hit.begin(), hit.end(), 0);
  if (missing == hit.end()) return {s.cell, std::move(tau)};
  const int j = static_cast<int>(missing - hit.begin());
  const CellSimplex& f = cells_[s.cell].faces[j];
  CellSimplex out{f.cell, {}};
  out.surjection.reserve(tau.size());
  for (int v : tau) out.surjection.push_back(f.surjection[v > j ? v - 1 : v]);
  return out;
}

CellSimplex SimplicialSetBuilder::degeneracy(const CellSimplex& s, int i) {
  CellSimplex out = s;
  out.surjection.insert(out.surjection.begin() + i, s.surjection[i]);
  return out;
}

std::vector<std::string> SimplicialSetBuilder::violations() const {
  std::vector<std::string> out;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const int k = cells_[c].dim;
    const CellSimplex self = nondegenerate(c, k);
    for (int j = 1; j <= k && k >= 2; ++j) {
      for (int i = 0; i < j; ++i) {
        if (face(face(self, j), i) != face(face(self, i), j - 1)) {
          const std::string name = cells_[c].label.empty() ? "cell " + std::to_string(c)
                                                           : cells_[c].label;
          out.push_back(name + ": d" + std::to_string(i) + "d" + std::to_string(j) + " != d" +
                        std::to_string(j - 1) + "d" + std::to_string(i));
        }
      }
    }
  }
  return out;
}

SimplicialSet SimplicialSetBuilder::build(int cap, std::vector<SimplexId>* cell_index) const {
  check_cap(cap);
  std::vector<std::map<CellSimplex, SimplexId>> index(cap + 1);
  std::vector<std::vector<CellSimplex>> simplices(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const int k = cells_[c].dim;
      if (k > n) continue;
      // Monotone surjections [n] -> [k] correspond to choosing which k of the
      // n steps increase.
      std::vector<char> step(n, 0);
      std::fill(step.end() - k, step.end(), 1);
      do {
        CellSimplex s{c, std::vector<int>(n + 1, 0)};
        for (int p = 1; p <= n; ++p) s.surjection[p] = s.surjection[p - 1] + step[p - 1];
        index[n].emplace(s, static_cast<SimplexId>(simplices[n].size()));
        simplices[n].push_back(std::move(s));
      } while (std::next_permutation(step.begin(), step.end()));
    }
  }
  std::vector<std::size_t> sizes(cap + 1);
  std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    sizes[n] = simplices[n].size();
    faces[n].assign(n == 0 ? 0 : n + 1, std::vector<SimplexId>(sizes[n]));
    degens[n].assign(n < cap ? n + 1 : 0, std::vector<SimplexId>(sizes[n]));
    for (SimplexId s = 0; s < sizes[n]; ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) {
        faces[n][i][s] = index[n - 1].at(face(simplices[n][s], i));
      }
      for (int i = 0; n < cap && i <= n; ++i) {
        degens[n][i][s] = index[n + 1].at(degeneracy(simplices[n][s], i));
      }
    }
  }
  if (cell_index) {
    cell_index->assign(cells_.size(), kNoSimplex);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const int k = cells_[c].dim;
      if (k <= cap) (*cell_index)[c] = index[k].at(nondegenerate(c, k));
    }
  }
  return SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces), std::move(degens));
}

// ---------------------------------------------------------------------------
// Standard objects

SimplicialSet point(int cap) { return discrete(1, cap); }

SimplicialSet empty_set(int cap) { return SimplicialSet(cap); }

SimplicialSet discrete(std::size_t points, int cap) {
  SimplicialSetBuilder b;
  for (std::size_t i = 0; i < points; ++i) b.add_vertex();
  return b.build(cap);
}

SimplicialSet standard_simplex(int n, int cap) {
  SimplicialSetBuilder b;
  std::map<std::vector<int>, std::size_t> cell_of;
  // Subsets of {0..n} by increasing size, each listed in increasing order.
  for (int size = 1; size <= n + 1; ++size) {
    std::vector<char> chosen(n + 1, 0);
    std::fill(chosen.begin(), chosen.begin() + size, 1);
    do {
      std::vector<int> subset;
      for (int v = 0; v <= n; ++v) {
        if (chosen[v]) subset.push_back(v);
      }
      std::vector<CellSimplex> faces;
      if (size > 1) {
        for (int i = 0; i < size; ++i) {
          std::vector<int> f = subset;
          f.erase(f.begin() + i);
          faces.push_back(SimplicialSetBuilder::nondegenerate(cell_of.at(f), size - 2));
        }
      }
      cell_of[subset] = size == 1 ? b.add_vertex() : b.add_cell(size - 1, std::move(faces));
    } while (std::prev_permutation(chosen.begin(), chosen.end()));
  }
  return b.build(cap);
}

SimplicialSet circle(int cap) {
  SimplicialSetBuilder b;
  const auto v = b.add_vertex("v");
  const auto vs = SimplicialSetBuilder::nondegenerate(v, 0);
  b.add_cell(1, {vs, vs}, "e");
  return b.build(cap);
}

SimplicialSet projective_plane(int cap) {
  SimplicialSetBuilder b;
  const auto v = b.add_vertex("v");
  const auto vs = SimplicialSetBuilder::nondegenerate(v, 0);
  const auto e = b.add_cell(1, {vs, vs}, "e");
  const auto es = SimplicialSetBuilder::nondegenerate(e, 1);
  b.add_cell(2, {es, SimplicialSetBuilder::degeneracy(vs, 0), es}, "f");
  return b.build(cap);
}

// ---------------------------------------------------------------------------
// Products, quotients, unions

SimplexId product_index(const SimplicialSet&, const SimplicialSet& b, int level, SimplexId x,
                        SimplexId y) {
  return static_cast<SimplexId>(x * b.size(level) + y);
}

SimplicialSet product(const SimplicialSet& a, const SimplicialSet& b) {
  if (a.cap() != b.cap()) {
    fail(Errc::CapMismatch, "product of caps " + std::to_string(a.cap()) + " and " +
                                std::to_string(b.cap()));
  }
  const int cap = a.cap();
  std::vector<std::size_t> sizes(cap + 1);
  std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
  for (int n = 0; n <= cap; ++n) sizes[n] = a.size(n) * b.size(n);
  for (int n = 0; n <= cap; ++n) {
    faces[n].assign(n == 0 ? 0 : n + 1, std::vector<SimplexId>(sizes[n]));
    degens[n].assign(n < cap ? n + 1 : 0, std::vector<SimplexId>(sizes[n]));
    for (SimplexId x = 0; x < a.size(n); ++x) {
      for (SimplexId y = 0; y < b.size(n); ++y) {
        const SimplexId p = product_index(a, b, n, x, y);
        for (int i = 0; n > 0 && i <= n; ++i) {
          faces[n][i][p] = product_index(a, b, n - 1, a.face(n, i, x), b.face(n, i, y));
        }
        for (int i = 0; n < cap && i <= n; ++i) {
          degens[n][i][p] =
              product_index(a, b, n + 1, a.degeneracy(n, i, x), b.degeneracy(n, i, y));
        }
      }
    }
  }
  return SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces), std::move(degens));
}

Quotient quotient(const SimplicialSet& a, const std::vector<SimplexPair>& seeds) {
  const int cap = a.cap();
  std::vector<std::size_t> offset(cap + 2, 0);
  for (int n = 0; n <= cap; ++n) offset[n + 1] = offset[n] + a.size(n);
  detail::UnionFind uf(offset[cap + 1]);

  std::deque<SimplexPair> queue(seeds.begin(), seeds.end());
  while (!queue.empty()) {
    const SimplexPair p = queue.front();
    queue.pop_front();
    if (!uf.unite(offset[p.level] + p.a, offset[p.level] + p.b)) continue;
    const int n = p.level;
    for (int i = 0; n > 0 && i <= n; ++i) {
      queue.push_back({n - 1, a.face(n, i, p.a), a.face(n, i, p.b)});
    }
    for (int i = 0; n < cap && i <= n; ++i) {
      queue.push_back({n + 1, a.degeneracy(n, i, p.a), a.degeneracy(n, i, p.b)});
    }
  }

  Quotient q;
  q.projection.levels.resize(cap + 1);
  std::vector<std::vector<SimplexId>> rep(cap + 1);
  std::vector<std::size_t> sizes(cap + 1, 0);
  for (int n = 0; n <= cap; ++n) {
    std::vector<SimplexId> class_of_root(offset[cap + 1], kNoSimplex);
    q.projection.levels[n].resize(a.size(n));
    for (SimplexId s = 0; s < a.size(n); ++s) {
      const std::size_t root = uf.find(offset[n] + s);
      if (class_of_root[root] == kNoSimplex) {
        class_of_root[root] = static_cast<SimplexId>(sizes[n]++);
        rep[n].push_back(s);
      }
      q.projection.levels[n][s] = class_of_root[root];
    }
  }
  std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    faces[n].assign(n == 0 ? 0 : n + 1, std::vector<SimplexId>(sizes[n]));
    degens[n].assign(n < cap ? n + 1 : 0, std::vector<SimplexId>(sizes[n]));
    for (SimplexId c = 0; c < sizes[n]; ++c) {
      const SimplexId r = rep[n][c];
      for (int i = 0; n > 0 && i <= n; ++i) {
        faces[n][i][c] = q.projection.levels[n - 1][a.face(n, i, r)];
      }
      for (int i = 0; n < cap && i <= n; ++i) {
        degens[n][i][c] = q.projection.levels[n + 1][a.degeneracy(n, i, r)];
      }
    }
  }
  q.set = SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces), std::move(degens));
  return q;
}

DisjointUnion disjoint_union(const std::vector<SimplicialSet>& parts, int cap) {
  if (!parts.empty()) cap = parts.front().cap();
  for (const auto& p : parts) {
    if (p.cap() != cap) fail(Errc::CapMismatch, "disjoint union of different caps");
  }
  DisjointUnion out{SimplicialSet(cap), {}};
  std::vector<std::size_t> sizes(cap + 1, 0);
  out.offsets.resize(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    out.offsets[k].resize(cap + 1);
    for (int n = 0; n <= cap; ++n) {
      out.offsets[k][n] = sizes[n];
      sizes[n] += parts[k].size(n);
    }
  }
  std::vector<std::vector<std::vector<SimplexId>>> faces(cap + 1), degens(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    faces[n].assign(n == 0 ? 0 : n + 1, std::vector<SimplexId>(sizes[n]));
    degens[n].assign(n < cap ? n + 1 : 0, std::vector<SimplexId>(sizes[n]));
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto& p = parts[k];
      for (SimplexId s = 0; s < p.size(n); ++s) {
        const std::size_t at = out.offsets[k][n] + s;
        for (int i = 0; n > 0 && i <= n; ++i) {
          faces[n][i][at] = static_cast<SimplexId>(out.offsets[k][n - 1] + p.face(n, i, s));
        }
        for (int i = 0; n < cap && i <= n; ++i) {
          degens[n][i][at] = static_cast<SimplexId>(out.offsets[k][n + 1] + p.degeneracy(n, i, s));
        }
      }
    }
  }
  out.set = SimplicialSet::from_tables(cap, std::move(sizes), std::move(faces), std::move(degens));
  return out;
}

std::vector<std::size_t> components(const SimplicialSet& a) {
  detail::UnionFind uf(a.size(0));
  if (a.cap() >= 1) {
    for (SimplexId e = 0; e < a.size(1); ++e) uf.unite(a.face(1, 0, e), a.face(1, 1, e));
  }
  std::vector<std::size_t> label(a.size(0));
  std::map<std::size_t, std::size_t> compact;
  for (SimplexId v = 0; v < a.size(0); ++v) {
    label[v] = compact.emplace(uf.find(v), compact.size()).first->second;
  }
  return label;
}

std::size_t component_count(const SimplicialSet& a) {
  const auto label = components(a);
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

}  // namespace flowcalc
