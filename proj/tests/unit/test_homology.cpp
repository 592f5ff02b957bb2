#include <array>
#include <functional>
#include <map>
#include <random>

#include "doctest.h"
#include "flowcalc/error.hpp"
#include "flowcalc/homology.hpp"
#include "flowcalc/poset.hpp"
#include "generators.hpp"

using namespace flowcalc;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t max_dim, int bound) {
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<int> entry(-bound, bound);
  IntMatrix m(dim(rng), dim(rng));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = entry(rng);
  }
  return m;
}

// Determinantal divisors d_k = gcd of k x k minors, brute force on tiny
// matrices: the product of the first k invariant factors equals d_k.
BigInt gcd_of_minors(const IntMatrix& m, std::size_t k) {
  BigInt g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<BigInt(std::vector<std::size_t>&, std::vector<std::size_t>&)> det =
      [&](std::vector<std::size_t>& rs, std::vector<std::size_t>& cs) -> BigInt {
    if (rs.size() == 1) return m(rs[0], cs[0]);
    BigInt total = 0;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      std::vector<std::size_t> r2(rs.begin() + 1, rs.end());
      std::vector<std::size_t> c2;
      for (std::size_t t = 0; t < cs.size(); ++t) {
        if (t != j) c2.push_back(cs[t]);
      }
      const BigInt sub = det(r2, c2);
      total += (j % 2 == 0 ? 1 : -1) * m(rs[0], cs[j]) * sub;
    }
    return total;
  };
  std::function<void(std::size_t, std::size_t)> pick_rows, pick_cols;
  std::vector<std::size_t> rs, cs;
  pick_cols = [&](std::size_t start, std::size_t need) {
    if (need == 0) {
      auto r = rs;
      auto c = cs;
      const BigInt d = abs(det(r, c));
      g = boost::multiprecision::gcd(g, d);
      return;
    }
    for (std::size_t j = start; j < m.cols(); ++j) {
      cs.push_back(j);
      pick_cols(j + 1, need - 1);
      cs.pop_back();
    }
  };
  pick_rows = [&](std::size_t start, std::size_t need) {
    if (need == 0) {
      pick_cols(0, k);
      return;
    }
    for (std::size_t i = start; i < m.rows(); ++i) {
      rs.push_back(i);
      pick_rows(i + 1, need - 1);
      rs.pop_back();
    }
  };
  pick_rows(0, k);
  return g;
}

}  // namespace

TEST_CASE("SNF of a fixed matrix") {
  const IntMatrix m = IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  const SmithForm s = smith_normal_form(m);
  REQUIRE(s.diagonal.size() == 3);
  CHECK(s.diagonal[0] == 2);
  CHECK(s.diagonal[1] == 6);
  CHECK(s.diagonal[2] == 12);
  CHECK(verify_certificate(m, s));
}

TEST_CASE("SNF certificates on random matrices") {
  std::mt19937 rng(7);
  for (int t = 0; t < 300; ++t) {
    const IntMatrix m = random_matrix(rng, 6, 9);
    const SmithForm s = smith_normal_form(m);
    REQUIRE(verify_certificate(m, s));
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
      CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
    }
  }
}

TEST_CASE("invariant factors match determinantal divisors") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    const IntMatrix m = random_matrix(rng, 4, 5);
    const SmithForm s = smith_normal_form(m);
    BigInt product = 1;
    for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
      const BigInt dk = gcd_of_minors(m, k);
      if (k <= s.diagonal.size()) {
        product *= s.diagonal[k - 1];
        CHECK(product == dk);
      } else {
        CHECK(dk == 0);
      }
    }
  }
}

TEST_CASE("tampered certificates are rejected") {
  const IntMatrix m = IntMatrix::from_rows({{1, 2}, {3, 4}});
  SmithForm s = smith_normal_form(m);
  CHECK(verify_certificate(m, s));
  s.left(0, 0) += 2;
  CHECK_FALSE(verify_certificate(m, s));
  SmithForm t = smith_normal_form(m);
  // Scaling a unimodular row by 2 breaks |det| = 1.
  for (std::size_t c = 0; c < t.left.cols(); ++c) t.left(0, c) *= 2;
  t.reduced = t.left * m * t.right;
  CHECK_FALSE(verify_certificate(m, t));
}

TEST_CASE("empty and zero matrices") {
  const IntMatrix z(3, 2);
  const SmithForm s = smith_normal_form(z);
  CHECK(s.diagonal.empty());
  CHECK(verify_certificate(z, s));
  const IntMatrix e(0, 4);
  CHECK(verify_certificate(e, smith_normal_form(e)));
}

TEST_CASE("circle homology") {
  const ChainComplex c = normalized_chains(circle(3));
  CHECK(c.is_complex());
  CHECK(homology(c, 0) == HomologyGroup{1, {}});
  CHECK(homology(c, 1) == HomologyGroup{1, {}});
  CHECK(homology(c, 2).trivial());
  CHECK_THROWS_AS(homology(c, 3), Error);
}

TEST_CASE("projective plane has 2-torsion in degree one") {
  const auto profile = homology_profile(projective_plane(3));
  REQUIRE(profile.size() == 3);
  CHECK(profile[0] == HomologyGroup{1, {}});
  CHECK(profile[1] == HomologyGroup{0, {2}});
  CHECK(profile[2].trivial());
  CHECK(profile[1].to_string() == "Z/2");
}

TEST_CASE("six-vertex projective plane agrees with the one-vertex model") {
  // Triangulation of RP^2 by the quotient of the icosahedron.
  const std::vector<std::array<int, 3>> triangles = {
      {0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
      {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}};
  // Each edge lies in exactly two triangles.
  std::map<std::pair<int, int>, int> edge_use;
  for (auto t : triangles) {
    edge_use[{t[0], t[1]}]++;
    edge_use[{t[0], t[2]}]++;
    edge_use[{t[1], t[2]}]++;
  }
  REQUIRE(edge_use.size() == 15);
  for (const auto& [e, n] : edge_use) CHECK(n == 2);

  SimplicialSetBuilder b;
  std::map<std::pair<int, int>, std::size_t> edge_cell;
  for (int v = 0; v < 6; ++v) b.add_vertex();
  for (const auto& [e, n] : edge_use) {
    edge_cell[e] = b.add_cell(1, {SimplicialSetBuilder::nondegenerate(e.second, 0),
                                  SimplicialSetBuilder::nondegenerate(e.first, 0)});
  }
  for (auto t : triangles) {
    b.add_cell(2, {SimplicialSetBuilder::nondegenerate(edge_cell[{t[1], t[2]}], 1),
                   SimplicialSetBuilder::nondegenerate(edge_cell[{t[0], t[2]}], 1),
                   SimplicialSetBuilder::nondegenerate(edge_cell[{t[0], t[1]}], 1)});
  }
  REQUIRE(b.violations().empty());
  const SimplicialSet rp2 = b.build(3);
  CHECK(homology_profile(rp2) == homology_profile(projective_plane(3)));
}

TEST_CASE("contractibility surrogate") {
  CHECK(is_homology_contractible(point(3)));
  CHECK(is_homology_contractible(standard_simplex(2, 3)));
  CHECK_FALSE(is_homology_contractible(circle(3)));
  CHECK_FALSE(is_homology_contractible(discrete(2, 3)));
  CHECK_THROWS_AS(is_homology_contractible(empty_set(3)), Error);
}

TEST_CASE("order complexes of bounded posets are contractible") {
  for (const auto& p : testing::bounded_posets(5)) {
    CHECK(is_homology_contractible(order_complex(p, 3)));
  }
}

TEST_CASE("boundary of the 3-simplex is a 2-sphere") {
  const Poset p = Poset::from_relations({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
  // Proper faces of the chain's simplex: drop the top cell by capping at 2.
  const auto profile = homology_profile(order_complex(p, 3));
  CHECK(profile[2].trivial());
  SimplicialSetBuilder b;
  for (int v = 0; v < 4; ++v) b.add_vertex();
  std::map<std::pair<int, int>, std::size_t> e;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      e[{i, j}] = b.add_cell(1, {SimplicialSetBuilder::nondegenerate(j, 0),
                                 SimplicialSetBuilder::nondegenerate(i, 0)});
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        b.add_cell(2, {SimplicialSetBuilder::nondegenerate(e[{j, k}], 1),
                       SimplicialSetBuilder::nondegenerate(e[{i, k}], 1),
                       SimplicialSetBuilder::nondegenerate(e[{i, j}], 1)});
      }
    }
  }
  const SimplicialSet sphere = b.build(3);
  const auto h = homology_profile(sphere);
  CHECK(h[0] == HomologyGroup{1, {}});
  CHECK(h[1].trivial());
  CHECK(h[2] == HomologyGroup{1, {}});
}
