#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

#include "flowcalc/simplicial_set.hpp"

namespace flowcalc {

using BigInt = boost::multiprecision::cpp_int;

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// D = U * M * V with U, V unimodular and D diagonal with d_1 | d_2 | ...
/// `diagonal` holds the nonzero entries only (all positive).
struct SmithForm {
  std::vector<BigInt> diagonal;
  IntMatrix left;   // U
  IntMatrix right;  // V
  IntMatrix reduced;  // D
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Checks U*M*V == D, D diagonal with the divisibility chain, and |det U| =
/// |det V| = 1 (via the inverse-free determinant of a triangularisation).
bool verify_certificate(const IntMatrix& m, const SmithForm& snf);

/// boundary[n] is the matrix of d_n : C_n -> C_{n-1} (rows = C_{n-1} basis,
/// columns = C_n basis); boundary[0] is the 0 x rank(0) matrix.
struct ChainComplex {
  std::vector<std::size_t> ranks;
  std::vector<IntMatrix> boundary;

  int top_degree() const { return static_cast<int>(ranks.size()) - 1; }
  bool is_complex() const;  // consecutive boundaries compose to zero
};

/// Normalized chains: free on nondegenerate simplices, degenerate faces
/// dropped.
ChainComplex normalized_chains(const SimplicialSet& a);

struct HomologyGroup {
  BigInt betti = 0;
  std::vector<BigInt> torsion;

  bool trivial() const { return betti == 0 && torsion.empty(); }
  std::string to_string() const;
  bool operator==(const HomologyGroup&) const = default;
};

/// H_n; requires n + 1 <= top degree so the incoming boundary is known.
/// Throws DegreeOutOfRange otherwise.
HomologyGroup homology(const ChainComplex& c, int n);

/// Homology in all computable degrees 0 .. cap - 1.
std::vector<HomologyGroup> homology_profile(const SimplicialSet& a);

/// Connected and reduced homology zero in degrees 1 .. cap - 1: the stand-in
/// used here for weak contractibility. Throws EmptyComplex on empty input.
bool is_homology_contractible(const SimplicialSet& a);

}  // namespace flowcalc
