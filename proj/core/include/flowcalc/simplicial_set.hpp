#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace flowcalc {

using SimplexId = std::uint32_t;
inline constexpr int kDefaultCap = 3;
inline constexpr int kMaxCap = 16;

/// Finite simplicial set truncated at level `cap`. Every level is stored
/// explicitly, degenerate simplices included, so that products and
/// compositions can be computed level by level.
class SimplicialSet {
 public:
  explicit SimplicialSet(int cap = kDefaultCap);

  /// Assembles a simplicial set from raw tables.
  /// faces[n][i][s] is d_i of simplex s at level n (n >= 1, 0 <= i <= n);
  /// degeneracies[n][i][s] is s_i of simplex s at level n (n < cap).
  static SimplicialSet from_tables(int cap, std::vector<std::size_t> sizes,
                                   std::vector<std::vector<std::vector<SimplexId>>> faces,
                                   std::vector<std::vector<std::vector<SimplexId>>> degeneracies);

  int cap() const { return cap_; }
  std::size_t size(int level) const { return sizes_.at(level); }
  std::size_t total_size() const;
  bool empty() const { return sizes_[0] == 0; }

  SimplexId face(int level, int i, SimplexId s) const { return faces_[level][i][s]; }
  SimplexId degeneracy(int level, int i, SimplexId s) const { return degens_[level][i][s]; }

  /// Bit i is set iff the simplex lies in the image of s_i.
  std::uint32_t degeneracy_mask(int level, SimplexId s) const { return masks_[level][s]; }
  bool is_degenerate(int level, SimplexId s) const { return masks_[level][s] != 0; }
  std::vector<SimplexId> nondegenerate(int level) const;
  std::size_t nondegenerate_count() const;

  /// Repeated s_0 lifting a simplex from `from` to `to` >= `from`.
  SimplexId lift(int from, int to, SimplexId s) const;

  /// Vertex i of a level-n simplex.
  SimplexId vertex(int level, SimplexId s, int i) const;

  /// Lists every failed simplicial identity; empty when the tables are a
  /// valid truncated simplicial set.
  std::vector<std::string> violations() const;

  /// Sub-object spanned by `keep` (per level membership flags), which must be
  /// closed under faces and degeneracies. Returns the sub-object and the
  /// per-level index of each kept simplex (-1 for dropped ones).
  std::pair<SimplicialSet, std::vector<std::vector<SimplexId>>> restrict_to(
      const std::vector<std::vector<char>>& keep) const;

  bool operator==(const SimplicialSet&) const = default;

 private:
  void compute_masks();

  int cap_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<std::vector<SimplexId>>> faces_;
  std::vector<std::vector<std::vector<SimplexId>>> degens_;
  std::vector<std::vector<std::uint32_t>> masks_;
};

inline constexpr SimplexId kNoSimplex = static_cast<SimplexId>(-1);

/// Per-level simplex functions.
struct SimplicialMap {
  std::vector<std::vector<SimplexId>> levels;

  SimplexId operator()(int level, SimplexId s) const { return levels[level][s]; }
  bool operator==(const SimplicialMap&) const = default;
};

bool is_simplicial_map(const SimplicialMap& f, const SimplicialSet& source,
                       const SimplicialSet& target);
SimplicialMap identity_map(const SimplicialSet& a);
SimplicialMap compose(const SimplicialMap& second, const SimplicialMap& first);

/// Simplex in Eilenberg-Zilber normal form: a nondegenerate cell followed by a
/// monotone surjection [n] -> [dim cell].
struct CellSimplex {
  std::size_t cell = 0;
  std::vector<int> surjection;

  int level() const { return static_cast<int>(surjection.size()) - 1; }
  auto operator<=>(const CellSimplex&) const = default;
};

/// Builds simplicial sets from their nondegenerate cells. Faces may be any
/// simplex in normal form, so collapsed faces (e.g. the circle or the
/// projective plane with one vertex) are expressible.
class SimplicialSetBuilder {
 public:
  std::size_t add_vertex(std::string label = {});
  /// `faces` lists d_0 .. d_dim; each entry is a simplex of level dim - 1.
  std::size_t add_cell(int dim, std::vector<CellSimplex> faces, std::string label = {});

  static CellSimplex nondegenerate(std::size_t cell, int dim);

  int dim(std::size_t cell) const { return cells_[cell].dim; }
  std::size_t cell_count() const { return cells_.size(); }
  const std::string& label(std::size_t cell) const { return cells_[cell].label; }

  CellSimplex face(const CellSimplex& s, int i) const;
  static CellSimplex degeneracy(const CellSimplex& s, int i);

  /// Checks d_i d_j = d_{j-1} d_i on every cell; returns offending cells.
  std::vector<std::string> violations() const;

  /// Materialises levels 0..cap. The optional output receives, for each
  /// cell, its index at level dim (cells above the cap are dropped).
  SimplicialSet build(int cap, std::vector<SimplexId>* cell_index = nullptr) const;

 private:
  struct Cell {
    int dim;
    std::vector<CellSimplex> faces;
    std::string label;
  };
  std::vector<Cell> cells_;
};

// Standard objects.
SimplicialSet point(int cap = kDefaultCap);
SimplicialSet empty_set(int cap = kDefaultCap);
SimplicialSet standard_simplex(int n, int cap = kDefaultCap);
SimplicialSet discrete(std::size_t points, int cap = kDefaultCap);
/// One vertex and one edge whose two faces coincide.
SimplicialSet circle(int cap = kDefaultCap);
/// One vertex, a loop e and a 2-cell with boundary e + e.
SimplicialSet projective_plane(int cap = kDefaultCap);

/// Levelwise cartesian product; simplex (a, b) at level n has index
/// a * size_B(n) + b. Throws CapMismatch.
SimplicialSet product(const SimplicialSet& a, const SimplicialSet& b);
SimplexId product_index(const SimplicialSet& a, const SimplicialSet& b, int level, SimplexId x,
                        SimplexId y);

struct Quotient {
  SimplicialSet set;
  SimplicialMap projection;
};

struct SimplexPair {
  int level;
  SimplexId a;
  SimplexId b;
};

/// Quotient by the smallest equivalence containing the seeds and closed
/// under all faces and degeneracies.
Quotient quotient(const SimplicialSet& a, const std::vector<SimplexPair>& seeds);

/// Levelwise disjoint union; summand k occupies a contiguous block per level
/// starting at offsets[k][level].
struct DisjointUnion {
  SimplicialSet set;
  std::vector<std::vector<std::size_t>> offsets;
};
DisjointUnion disjoint_union(const std::vector<SimplicialSet>& parts, int cap = kDefaultCap);

/// Connected components: for each vertex, the index of its component.
std::vector<std::size_t> components(const SimplicialSet& a);
std::size_t component_count(const SimplicialSet& a);

}  // namespace flowcalc
