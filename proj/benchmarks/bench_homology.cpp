#include <random>

#include <benchmark/benchmark.h>

#include "flowcalc/homology.hpp"
#include "flowcalc/simplicial_set.hpp"

using namespace flowcalc;

namespace {

IntMatrix random_matrix(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> entry(-9, 9);
  IntMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = entry(rng);
  }
  return m;
}

void BM_SmithNormalForm(benchmark::State& state) {
  const IntMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_VerifyCertificate(benchmark::State& state) {
  const IntMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)), 5);
  const SmithForm s = smith_normal_form(m);
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(m, s));
}
BENCHMARK(BM_VerifyCertificate)->Arg(8)->Arg(32);

void BM_HomologyProjectivePlane(benchmark::State& state) {
  const SimplicialSet rp2 = projective_plane(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(homology_profile(rp2));
}
BENCHMARK(BM_HomologyProjectivePlane)->Arg(2)->Arg(3)->Arg(4);

void BM_HomologySimplex(benchmark::State& state) {
  const SimplicialSet s = standard_simplex(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(homology_profile(s));
}
BENCHMARK(BM_HomologySimplex)->Arg(2)->Arg(3)->Arg(4);

}  // namespace
