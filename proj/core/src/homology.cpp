#include "flowcalc/homology.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "flowcalc/error.hpp"

namespace flowcalc {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r].at(c);
  }
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const BigInt& x) { return x == 0; });
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const BigInt& a = (*this)(r, k);
      if (a == 0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

namespace {

class SmithReducer {
 public:
  explicit SmithReducer(const IntMatrix& m)
      : d_(m), u_(IntMatrix::identity(m.rows())), v_(IntMatrix::identity(m.cols())) {}

  SmithForm run() {
    const std::size_t limit = std::min(d_.rows(), d_.cols());
    std::vector<BigInt> diagonal;
    for (std::size_t t = 0; t < limit; ++t) {
      if (!move_smallest_to(t, d_.rows(), d_.cols())) break;
      reduce_pivot(t);
      if (d_(t, t) < 0) negate_row(t);
      diagonal.push_back(d_(t, t));
    }
    return {std::move(diagonal), std::move(u_), std::move(v_), std::move(d_)};
  }

 private:
  // Swaps the smallest nonzero entry of the block [t, row_end) x [t, col_end)
  // into position (t, t).
  bool move_smallest_to(std::size_t t, std::size_t row_end, std::size_t col_end) {
    std::size_t best_r = 0, best_c = 0;
    BigInt best = 0;
    for (std::size_t r = t; r < row_end; ++r) {
      for (std::size_t c = t; c < col_end; ++c) {
        const BigInt& x = d_(r, c);
        if (x == 0) continue;
        BigInt ax = abs(x);
        if (best == 0 || ax < best) {
          best = std::move(ax);
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best == 0) return false;
    swap_rows(t, best_r);
    swap_cols(t, best_c);
    return true;
  }

  // Smallest nonzero entry in row t and column t (from t on) becomes the pivot.
  void repivot(std::size_t t) {
    std::size_t best_r = t, best_c = t;
    BigInt best = abs(d_(t, t));
    for (std::size_t r = t + 1; r < d_.rows(); ++r) {
      if (d_(r, t) != 0 && (best == 0 || abs(d_(r, t)) < best)) {
        best = abs(d_(r, t));
        best_r = r;
        best_c = t;
      }
    }
    for (std::size_t c = t + 1; c < d_.cols(); ++c) {
      if (d_(t, c) != 0 && (best == 0 || abs(d_(t, c)) < best)) {
        best = abs(d_(t, c));
        best_r = t;
        best_c = c;
      }
    }
    swap_rows(t, best_r);
    swap_cols(t, best_c);
  }

  void reduce_pivot(std::size_t t) {
    for (;;) {
      bool clean = true;
      for (std::size_t r = t + 1; r < d_.rows(); ++r) {
        if (d_(r, t) == 0) continue;
        const BigInt q = d_(r, t) / d_(t, t);
        if (q != 0) add_row(r, t, -q);
        if (d_(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < d_.cols(); ++c) {
        if (d_(t, c) == 0) continue;
        const BigInt q = d_(t, c) / d_(t, t);
        if (q != 0) add_col(c, t, -q);
        if (d_(t, c) != 0) clean = false;
      }
      if (!clean) {
        repivot(t);
        continue;
      }
      // Row and column are clear; enforce divisibility of the remaining block.
      bool divisible = true;
      for (std::size_t r = t + 1; r < d_.rows() && divisible; ++r) {
        for (std::size_t c = t + 1; c < d_.cols(); ++c) {
          if (d_(r, c) % d_(t, t) != 0) {
            add_row(t, r, 1);
            divisible = false;
            break;
          }
        }
      }
      if (divisible) return;
    }
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < d_.cols(); ++c) std::swap(d_(a, c), d_(b, c));
    for (std::size_t c = 0; c < u_.cols(); ++c) std::swap(u_(a, c), u_(b, c));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < d_.rows(); ++r) std::swap(d_(r, a), d_(r, b));
    for (std::size_t r = 0; r < v_.rows(); ++r) std::swap(v_(r, a), v_(r, b));
  }

  // row[target] += factor * row[source]
  void add_row(std::size_t target, std::size_t source, const BigInt& factor) {
    for (std::size_t c = 0; c < d_.cols(); ++c) {
      if (d_(source, c) != 0) d_(target, c) += factor * d_(source, c);
    }
    for (std::size_t c = 0; c < u_.cols(); ++c) {
      if (u_(source, c) != 0) u_(target, c) += factor * u_(source, c);
    }
  }

  // col[target] += factor * col[source]
  void add_col(std::size_t target, std::size_t source, const BigInt& factor) {
    for (std::size_t r = 0; r < d_.rows(); ++r) {
      if (d_(r, source) != 0) d_(r, target) += factor * d_(r, source);
    }
    for (std::size_t r = 0; r < v_.rows(); ++r) {
      if (v_(r, source) != 0) v_(r, target) += factor * v_(r, source);
    }
  }

  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < d_.cols(); ++c) d_(r, c) = -d_(r, c);
    for (std::size_t c = 0; c < u_.cols(); ++c) u_(r, c) = -u_(r, c);
  }

  IntMatrix d_;
  IntMatrix u_;
  IntMatrix v_;
};

// Fraction-free Bareiss elimination.
BigInt determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap_with = k + 1;
      while (swap_with < n && m(swap_with, k) == 0) ++swap_with;
      if (swap_with == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap_with, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) { return SmithReducer(m).run(); }

bool verify_certificate(const IntMatrix& m, const SmithForm& snf) {
  if (snf.left.rows() != m.rows() || snf.left.cols() != m.rows()) return false;
  if (snf.right.rows() != m.cols() || snf.right.cols() != m.cols()) return false;
  if (snf.left * m * snf.right != snf.reduced) return false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const BigInt& x = snf.reduced(r, c);
      if (r != c && x != 0) return false;
      if (r == c) {
        const BigInt expected = r < snf.diagonal.size() ? snf.diagonal[r] : BigInt(0);
        if (x != expected) return false;
      }
    }
  }
  for (std::size_t i = 0; i < snf.diagonal.size(); ++i) {
    if (snf.diagonal[i] <= 0) return false;
    if (i + 1 < snf.diagonal.size() && snf.diagonal[i + 1] % snf.diagonal[i] != 0) return false;
  }
  return abs(determinant(snf.left)) == 1 && abs(determinant(snf.right)) == 1;
}

bool ChainComplex::is_complex() const {
  for (std::size_t n = 1; n + 1 < boundary.size(); ++n) {
    if (boundary[n].rows() == 0 || boundary[n + 1].cols() == 0) continue;
    if (!(boundary[n] * boundary[n + 1]).is_zero()) return false;
  }
  return true;
}

ChainComplex normalized_chains(const SimplicialSet& a) {
  ChainComplex c;
  const int cap = a.cap();
  std::vector<std::vector<SimplexId>> basis(cap + 1);
  std::vector<std::map<SimplexId, std::size_t>> position(cap + 1);
  for (int n = 0; n <= cap; ++n) {
    basis[n] = a.nondegenerate(n);
    for (std::size_t k = 0; k < basis[n].size(); ++k) position[n][basis[n][k]] = k;
    c.ranks.push_back(basis[n].size());
  }
  c.boundary.emplace_back(0, c.ranks[0]);
  for (int n = 1; n <= cap; ++n) {
    IntMatrix d(c.ranks[n - 1], c.ranks[n]);
    for (std::size_t col = 0; col < basis[n].size(); ++col) {
      for (int i = 0; i <= n; ++i) {
        const SimplexId f = a.face(n, i, basis[n][col]);
        if (a.is_degenerate(n - 1, f)) continue;
        d(position[n - 1].at(f), col) += (i % 2 == 0) ? 1 : -1;
      }
    }
    c.boundary.push_back(std::move(d));
  }
  return c;
}

std::string HomologyGroup::to_string() const {
  std::string out;
  if (betti != 0) out = betti == 1 ? "Z" : "Z^" + betti.str();
  for (const auto& t : torsion) {
    if (!out.empty()) out += " + ";
    out += "Z/" + t.str();
  }
  return out.empty() ? "0" : out;
}

namespace {

std::size_t rank_of(const IntMatrix& m, std::vector<BigInt>* divisors = nullptr) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  SmithForm snf = smith_normal_form(m);
  if (divisors) *divisors = snf.diagonal;
  return snf.diagonal.size();
}

}  // namespace

HomologyGroup homology(const ChainComplex& c, int n) {
  if (n < 0 || n + 1 > c.top_degree()) {
    fail(Errc::DegreeOutOfRange, "homology in degree " + std::to_string(n) +
                                     " needs boundaries up to degree " + std::to_string(n + 1) +
                                     ", complex stops at " + std::to_string(c.top_degree()));
  }
  const std::size_t out_rank = n == 0 ? 0 : rank_of(c.boundary[n]);
  std::vector<BigInt> divisors;
  const std::size_t in_rank = rank_of(c.boundary[n + 1], &divisors);
  HomologyGroup h;
  h.betti = BigInt(c.ranks[n]) - BigInt(out_rank) - BigInt(in_rank);
  for (const auto& d : divisors) {
    if (d > 1) h.torsion.push_back(d);
  }
  return h;
}

std::vector<HomologyGroup> homology_profile(const SimplicialSet& a) {
  const ChainComplex c = normalized_chains(a);
  std::vector<HomologyGroup> out;
  for (int n = 0; n + 1 <= c.top_degree(); ++n) out.push_back(homology(c, n));
  return out;
}

bool is_homology_contractible(const SimplicialSet& a) {
  if (a.empty()) fail(Errc::EmptyComplex, "contractibility of the empty simplicial set");
  if (component_count(a) != 1) return false;
  const ChainComplex c = normalized_chains(a);
  for (int n = 1; n + 1 <= c.top_degree(); ++n) {
    if (!homology(c, n).trivial()) return false;
  }
  return true;
}

}  // namespace flowcalc
