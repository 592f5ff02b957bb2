#include <string>

#include <benchmark/benchmark.h>

#include "flowcalc/dihomotopy.hpp"
#include "flowcalc/poset.hpp"
#include "flowcalc/presentation.hpp"

using namespace flowcalc;

namespace {

Poset chain(std::size_t length) {
  std::vector<std::string> names;
  std::vector<std::pair<Element, Element>> rel;
  for (std::size_t k = 0; k <= length; ++k) {
    names.push_back(std::to_string(k));
    if (k > 0) rel.push_back({k - 1, k});
  }
  return Poset::from_relations(names, rel);
}

// n x n grid of commuting squares.
FlowPresentation grid(std::size_t n) {
  FlowPresentation p;
  p.cap = 2;
  auto id = [n](std::size_t i, std::size_t j) { return static_cast<StateId>(i * (n + 1) + j); };
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) p.states.push_back(std::to_string(i) + "," + std::to_string(j));
  }
  std::vector<std::size_t> right((n + 1) * (n + 1)), down((n + 1) * (n + 1));
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      if (j < n) right[id(i, j)] = p.add_block(id(i, j), id(i, j + 1), point(2));
      if (i < n) down[id(i, j)] = p.add_block(id(i, j), id(i + 1, j), point(2));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Word a{0, {{right[id(i, j)], 0}, {down[id(i, j + 1)], 0}}};
      Word b{0, {{down[id(i, j)], 0}, {right[id(i + 1, j)], 0}}};
      p.relations.push_back({a, b});
    }
  }
  return p;
}

void BM_SaturateGrid(benchmark::State& state) {
  const FlowPresentation p = grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(saturate(p));
}
BENCHMARK(BM_SaturateGrid)->Arg(1)->Arg(2)->Arg(3);

void BM_SaturateChainPresentation(benchmark::State& state) {
  const FlowPresentation p = present(poset_flow(chain(static_cast<std::size_t>(state.range(0))), 2));
  for (auto _ : state) benchmark::DoNotOptimize(saturate(p));
}
BENCHMARK(BM_SaturateChainPresentation)->Arg(3)->Arg(5)->Arg(7);

void BM_TensorSimplex(benchmark::State& state) {
  const Flow x = poset_flow(chain(3), 2);
  const SimplicialSet u = standard_simplex(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(tensor(u, x));
}
BENCHMARK(BM_TensorSimplex)->Arg(0)->Arg(1)->Arg(2);

void BM_BranchingSpace(benchmark::State& state) {
  const Flow x = poset_flow(chain(static_cast<std::size_t>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(branching_space(x, Direction::Minus));
}
BENCHMARK(BM_BranchingSpace)->Arg(3)->Arg(6);

}  // namespace
