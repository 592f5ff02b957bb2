#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowcalc/simplicial_set.hpp"

namespace flowcalc {

using Element = std::size_t;

/// Finite partial order. The strict order is stored transitively closed, so
/// comparisons are O(1) lookups.
class Poset {
 public:
  Poset() = default;

  /// Builds the order generated by `less_pairs` (typically covering
  /// relations). Throws PartialOrderViolation when the pairs contain a cycle.
  static Poset from_relations(std::vector<std::string> names,
                              const std::vector<std::pair<Element, Element>>& less_pairs);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Element e) const { return names_.at(e); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Element> find(const std::string& name) const;

  bool less(Element a, Element b) const { return less_[a * size() + b]; }
  bool leq(Element a, Element b) const { return a == b || less(a, b); }
  bool comparable(Element a, Element b) const { return leq(a, b) || leq(b, a); }
  bool covers(Element a, Element b) const;  // a < b with nothing in between

  std::vector<std::pair<Element, Element>> covering_relations() const;
  std::vector<std::pair<Element, Element>> strict_pairs() const;

  /// Closed interval [a, b] in increasing linear-extension order.
  std::vector<Element> interval(Element a, Element b) const;

  std::optional<Element> bottom() const;
  std::optional<Element> top() const;
  bool bounded() const;

  /// A linear extension; elements appear after everything below them.
  const std::vector<Element>& topological_order() const { return topo_; }

 private:
  std::vector<std::string> names_;
  std::vector<char> less_;
  std::vector<Element> topo_;
};

struct PosetReport {
  bool bounded = false;
  bool locally_finite = true;
  std::optional<Element> bottom;
  std::optional<Element> top;
};

PosetReport validate_poset(const Poset& poset);

/// Longest chain length between a < b, by dynamic programming over the
/// Hasse diagram. Throws NotComparable unless a < b.
int chain_length(const Poset& poset, Element a, Element b);

/// Order complex as a simplicial set: n-simplices are weakly increasing
/// sequences x_0 <= ... <= x_n; the nondegenerate ones are the strict chains.
SimplicialSet order_complex(const Poset& poset, int cap = kDefaultCap);

/// Strictly increasing chain from the bottom to the top of a bounded poset.
using ExtSimplex = std::vector<Element>;

/// Generating arrow d_i : source -> target of the opposite category, deleting
/// the interior vertex at position `index` (0 < index < p).
struct ExtArrow {
  std::size_t source;
  std::size_t target;
  std::size_t index;
};

struct ExtCategory {
  std::vector<ExtSimplex> objects;
  std::vector<ExtArrow> generators;
  std::vector<long long> degree;
  std::size_t terminal = 0;  // the object (bottom, top)

  std::optional<std::size_t> find(const ExtSimplex& s) const;
  /// Target of the interior deletion at `index` applied to object `obj`.
  std::size_t apply(std::size_t obj, std::size_t index) const;
};

/// Chains from bottom to top with interior-deletion generators and the degree
/// sum of squared chain lengths. Throws NotBounded for unbounded posets.
ExtCategory ext_category(const Poset& poset);

struct ReedyViolation {
  std::string kind;  // "degree" or "triangle"
  std::vector<Element> witness;
  long long lhs = 0;
  long long rhs = 0;
};

struct ReedyReport {
  std::size_t arrows_checked = 0;
  std::size_t triangles_checked = 0;
  std::vector<ReedyViolation> violations;
  bool direct() const { return violations.empty(); }
};

ReedyReport reedy_report(const Poset& poset);

}  // namespace flowcalc
