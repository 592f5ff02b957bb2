#pragma once

#include <boost/pending/disjoint_sets.hpp>
#include <cstddef>

namespace flowcalc::detail {

/// Thin wrapper over boost's disjoint sets with path compression and union by
/// rank, reporting whether a union actually merged two classes.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : sets_(n) {}

  std::size_t find(std::size_t x) { return sets_.find_set(x); }

  bool unite(std::size_t a, std::size_t b) {
    const std::size_t ra = sets_.find_set(a);
    const std::size_t rb = sets_.find_set(b);
    if (ra == rb) return false;
    sets_.link(ra, rb);
    return true;
  }

 private:
  boost::disjoint_sets_with_storage<> sets_;
};

}  // namespace flowcalc::detail
