#include <string>

#include <benchmark/benchmark.h>

#include "flowcalc/poset.hpp"

using namespace flowcalc;

namespace {

// Bottom, top, and `width` incomparable two-element chains in between.
Poset ladder(std::size_t width) {
  std::vector<std::string> names{"0", "1"};
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t k = 0; k < width; ++k) {
    const Element lo = names.size();
    names.push_back("a" + std::to_string(k));
    names.push_back("b" + std::to_string(k));
    rel.push_back({0, lo});
    rel.push_back({lo, lo + 1});
    rel.push_back({lo + 1, 1});
  }
  return Poset::from_relations(names, rel);
}

Poset boolean_lattice(std::size_t bits) {
  const std::size_t n = std::size_t{1} << bits;
  std::vector<std::string> names;
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t s = 0; s < n; ++s) {
    names.push_back(std::to_string(s));
    for (std::size_t b = 0; b < bits; ++b) {
      if (!(s >> b & 1)) rel.push_back({s, s | std::size_t{1} << b});
    }
  }
  return Poset::from_relations(names, rel);
}

void BM_OrderComplex(benchmark::State& state) {
  const Poset p = boolean_lattice(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(order_complex(p, 3));
}
BENCHMARK(BM_OrderComplex)->Arg(2)->Arg(3)->Arg(4);

void BM_ExtCategory(benchmark::State& state) {
  const Poset p = boolean_lattice(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ext_category(p));
}
BENCHMARK(BM_ExtCategory)->Arg(2)->Arg(3)->Arg(4);

void BM_ReedyReport(benchmark::State& state) {
  const Poset p = ladder(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reedy_report(p));
}
BENCHMARK(BM_ReedyReport)->Arg(2)->Arg(4)->Arg(8);

}  // namespace
