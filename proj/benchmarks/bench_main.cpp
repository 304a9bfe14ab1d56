#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "renorm2/correspondence.hpp"
#include "renorm2/elementary.hpp"
#include "renorm2/jet.hpp"
#include "renorm2/zalcman.hpp"

namespace {

using renorm2::Complex;

renorm2::Jet random_jet(std::size_t order, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  renorm2::Jet out(order);
  for (std::size_t l = 0; l <= order; ++l)
    out.set_coeff(l, Complex{box(rng), box(rng)});
  return out;
}

renorm2::ElementaryMap bench_map() {
  return {Complex{2.0}, Complex{3.0},
          renorm2::CoefficientRule::polynomial(
              {Complex{0.0}, Complex{0.0}, Complex{1.0}})};
}

void jet_mul(benchmark::State& state) {
  std::size_t order = static_cast<std::size_t>(state.range(0));
  renorm2::Jet a = random_jet(order, 11);
  renorm2::Jet b = random_jet(order, 17);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
}
BENCHMARK(jet_mul)->Arg(16)->Arg(64)->Arg(256);

void jet_compose(benchmark::State& state) {
  std::size_t order = static_cast<std::size_t>(state.range(0));
  renorm2::Jet outer = random_jet(order, 11);
  renorm2::Jet inner = random_jet(order, 17);
  inner.set_coeff(0, Complex{0.0});
  for (auto _ : state) benchmark::DoNotOptimize(compose(outer, inner));
}
BENCHMARK(jet_compose)->Arg(16)->Arg(64);

void elementary_iterate(benchmark::State& state) {
  renorm2::ElementaryMap f = bench_map();
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate(f, n, 32));
}
// Coefficients of the closed iterate grow like (alpha^2)^n, so depth 512
// would overflow the double range for this map.
BENCHMARK(elementary_iterate)->Arg(8)->Arg(64)->Arg(256);

void renormalized_composite(benchmark::State& state) {
  renorm2::ElementaryMap f = bench_map();
  int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(renorm_compose(f, 2, n, 32));
}
BENCHMARK(renormalized_composite)->Arg(8)->Arg(64);

void fubini_study_derivative(benchmark::State& state) {
  renorm2::SampledFamily fam =
      renorm2::elementary_iterate_family(bench_map(), 32, {{}, 0.5, 0.5});
  int n = static_cast<int>(state.range(0));
  renorm2::CPoint p{Complex{0.1}, Complex{0.1}};
  for (auto _ : state)
    benchmark::DoNotOptimize(renorm2::fs_derivative(fam, n, p));
}
BENCHMARK(fubini_study_derivative)->Arg(4)->Arg(12);

void branch_germ_series(benchmark::State& state) {
  std::size_t order = static_cast<std::size_t>(state.range(0));
  renorm2::AlgebraicPart part;
  part.terms.push_back(
      {Complex{1.0}, Complex{1.0}, renorm2::Rational::make(1, 2)});
  for (auto _ : state)
    benchmark::DoNotOptimize(renorm2::branch_germ(part, order));
}
BENCHMARK(branch_germ_series)->Arg(16)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
