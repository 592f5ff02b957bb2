#include <random>

#include "doctest.h"
#include "flowcalc/error.hpp"
#include "flowcalc/isomorphism.hpp"
#include "flowcalc/simplicial_set.hpp"
#include "generators.hpp"

using namespace flowcalc;

namespace {

// Monotone maps [k] -> [n], counted by stars and bars.
std::size_t monotone_maps(int k, int n) {
  std::size_t num = 1, den = 1;
  for (int i = 1; i <= n; ++i) {
    num *= static_cast<std::size_t>(k + 1 + i);
    den *= static_cast<std::size_t>(i);
  }
  return num / den;
}

long euler(const SimplicialSet& s) {
  long chi = 0;
  for (int n = 0; n <= s.cap(); ++n) {
    const long nd = static_cast<long>(s.nondegenerate(n).size());
    chi += n % 2 == 0 ? nd : -nd;
  }
  return chi;
}

}  // namespace

TEST_CASE("standard simplices have the monotone-map counts") {
  for (int n = 0; n <= 3; ++n) {
    const SimplicialSet d = standard_simplex(n, 3);
    CHECK(d.violations().empty());
    for (int k = 0; k <= 3; ++k) CHECK(d.size(k) == monotone_maps(k, n));
    CHECK(d.nondegenerate(n).size() == 1);
  }
}

TEST_CASE("standard simplex vertices follow their labels") {
  const SimplicialSet d1 = standard_simplex(1, 2);
  const SimplexId edge = d1.nondegenerate(1).front();
  CHECK(d1.face(1, 1, edge) == 0);
  CHECK(d1.face(1, 0, edge) == 1);
}

TEST_CASE("point, empty and discrete") {
  CHECK(point(2).size(2) == 1);
  CHECK(empty_set(2).empty());
  CHECK(discrete(3, 1).size(1) == 3);
  CHECK(discrete(3, 1).nondegenerate_count() == 3);
}

TEST_CASE("collapsed models are valid") {
  const SimplicialSet s1 = circle(3);
  CHECK(s1.violations().empty());
  CHECK(s1.size(0) == 1);
  CHECK(s1.nondegenerate(1).size() == 1);
  CHECK(euler(s1) == 0);
  const SimplicialSet rp2 = projective_plane(3);
  CHECK(rp2.violations().empty());
  CHECK(euler(rp2) == 1);
}

TEST_CASE("degeneracy masks") {
  const SimplicialSet d1 = standard_simplex(1, 3);
  std::size_t degenerate = 0;
  for (SimplexId s = 0; s < d1.size(2); ++s) degenerate += d1.is_degenerate(2, s);
  CHECK(degenerate == d1.size(2));  // no nondegenerate 2-simplices in an edge
  const SimplexId v = 0;
  const SimplexId ss = d1.degeneracy(1, 0, d1.degeneracy(0, 0, v));
  CHECK(d1.degeneracy_mask(2, ss) == 0b11);
}

TEST_CASE("product of simplices") {
  const SimplicialSet a = standard_simplex(1, 3);
  const SimplicialSet p = product(a, a);
  CHECK(p.violations().empty());
  for (int k = 0; k <= 3; ++k) CHECK(p.size(k) == a.size(k) * a.size(k));
  // The square splits into two triangles.
  CHECK(p.nondegenerate(2).size() == 2);
  CHECK(p.nondegenerate(1).size() == 5);
  CHECK(euler(p) == 1);
  CHECK_THROWS_AS(product(point(2), point(3)), Error);
}

TEST_CASE("quotient collapses an edge to a circle") {
  const SimplicialSet a = standard_simplex(1, 3);
  const Quotient q = quotient(a, {{0, 0, 1}});
  CHECK(q.set.violations().empty());
  CHECK(q.set.size(0) == 1);
  CHECK(q.set.nondegenerate(1).size() == 1);
  CHECK(isomorphic(q.set, circle(3)));
  CHECK(is_simplicial_map(q.projection, a, q.set));
}

TEST_CASE("disjoint union and components") {
  const DisjointUnion u = disjoint_union({circle(2), point(2), standard_simplex(2, 2)}, 2);
  CHECK(u.set.violations().empty());
  CHECK(component_count(u.set) == 3);
  CHECK(u.offsets[1][0] == 1);
  CHECK(u.offsets[2][0] == 2);
  CHECK(component_count(empty_set(2)) == 0);
}

TEST_CASE("restriction to a sub-object") {
  const SimplicialSet d2 = standard_simplex(2, 2);
  std::vector<std::vector<char>> keep(3);
  for (int n = 0; n <= 2; ++n) {
    keep[n].assign(d2.size(n), 0);
    for (SimplexId s = 0; s < d2.size(n); ++s) {
      bool ok = true;
      for (int i = 0; i <= n; ++i) ok = ok && d2.vertex(n, s, i) != 2;
      keep[n][s] = ok;
    }
  }
  const auto [edge, index] = d2.restrict_to(keep);
  CHECK(isomorphic(edge, standard_simplex(1, 2)));
  CHECK(index[0][2] == kNoSimplex);
}

TEST_CASE("builder rejects bad faces") {
  SimplicialSetBuilder b;
  const auto v = b.add_vertex();
  CHECK_THROWS_AS(b.add_cell(1, {SimplicialSetBuilder::nondegenerate(v, 0)}), Error);
  CHECK_THROWS_AS(b.add_cell(1, {SimplicialSetBuilder::nondegenerate(5, 0),
                                 SimplicialSetBuilder::nondegenerate(v, 0)}),
                  Error);
  const auto w = b.add_vertex();
  const auto e = b.add_cell(1, {SimplicialSetBuilder::nondegenerate(w, 0),
                                SimplicialSetBuilder::nondegenerate(v, 0)});
  // A triangle with d0 = d1 = d2 = e breaks d0 d1 = d0 d0.
  const auto es = SimplicialSetBuilder::nondegenerate(e, 1);
  b.add_cell(2, {es, es, es});
  CHECK_FALSE(b.violations().empty());
}

TEST_CASE("small simplicial set enumeration is valid and iso-free") {
  const auto sets = testing::small_simplicial_sets(2, 3);
  CHECK(sets.size() > 10);
  for (const auto& s : sets) CHECK(s.violations().empty());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) CHECK_FALSE(isomorphic(sets[i], sets[j]));
  }
}

TEST_CASE("identity and composite maps are simplicial") {
  const SimplicialSet a = projective_plane(2);
  const SimplicialMap id = identity_map(a);
  CHECK(is_simplicial_map(id, a, a));
  CHECK(compose(id, id) == id);
}
