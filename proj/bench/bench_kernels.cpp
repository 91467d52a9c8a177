// Serial reference against the OpenMP kernels. Run with FORMWAVE_THREADS or
// OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <random>
#include <vector>

#include "formwave/grid.hpp"
#include "formwave/hankel.hpp"
#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"

using namespace formwave;
using kernels::cplx;

namespace {

std::vector<cplx> noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& c : v) c = {d(rng), d(rng)};
  return v;
}

template <bool Parallel>
void wedge(benchmark::State& st) {
  const GridSpec g(3, static_cast<int>(st.range(0)), 4.0);
  const int q = 1;
  const auto x = g.coordinates();
  const auto in = noise(binomial(3, q) * g.node_count(), 1);
  std::vector<cplx> out(binomial(3, q + 1) * g.node_count());
  const kernels::SeparableCovector cov{x, 1.0};
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::wedge_covector(g, q, cov, in, out);
    else kernels::serial::wedge_covector(g, q, cov, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.node_count()));
}

template <bool Parallel>
void interior(benchmark::State& st) {
  const GridSpec g(3, static_cast<int>(st.range(0)), 4.0);
  const int q = 1;
  const auto x = g.coordinates();
  const auto in = noise(binomial(3, q + 1) * g.node_count(), 2);
  std::vector<cplx> out(binomial(3, q) * g.node_count());
  const kernels::SeparableCovector cov{x, 1.0};
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::interior_covector(g, q, cov, in, out);
    else kernels::serial::interior_covector(g, q, cov, in, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.node_count()));
}

template <bool Parallel>
void weighted_inner(benchmark::State& st) {
  const GridSpec g(3, static_cast<int>(st.range(0)), 4.0);
  const auto a = noise(3 * g.node_count(), 3);
  const kernels::RadialWindow win{0.0, 3.0};
  for (auto _ : st) {
    cplx s = Parallel ? kernels::parallel::weighted_inner(g, -1.5, win, a, a, 3)
                      : kernels::serial::weighted_inner(g, -1.5, win, a, a, 3);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.node_count()));
}

template <bool Parallel>
void mode_solve(benchmark::State& st) {
  const GridSpec g(3, static_cast<int>(st.range(0)), 4.0);
  const int q = 1;
  const auto fe = noise(3 * g.node_count(), 4);
  const auto fh = noise(3 * g.node_count(), 5);
  std::vector<cplx> ue(fe.size()), uh(fh.size());
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::mode_solve(g, q, cplx(0.6, 0.4), fe, fh, ue, uh);
    else kernels::serial::mode_solve(g, q, cplx(0.6, 0.4), fe, fh, ue, uh);
    benchmark::DoNotOptimize(ue.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.node_count()));
}

template <bool Parallel>
void representation(benchmark::State& st) {
  const int dim = 3, q = 1;
  const std::size_t sources = static_cast<std::size_t>(st.range(0)), points = 256;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> pos(sources * dim), pts(points * dim);
  for (auto& v : pos) v = u(rng);
  for (auto& v : pts) v = 5.0 * u(rng);
  const auto f = noise(sources * 3, 7), g = noise(sources * 3, 8);
  const auto df = noise(sources, 9), rg = noise(sources, 10);
  const kernels::SourceSet src{dim, q, pos, f, g, df, rg, 1e-3};
  const HankelKernel k(3, cplx(0.6, 0.4));
  std::vector<cplx> e(points * 3), h(points * 3);
  for (auto _ : st) {
    if constexpr (Parallel) kernels::parallel::representation(src, k.profile(), k.omega(), pts, 0.01, e, h);
    else kernels::serial::representation(src, k.profile(), k.omega(), pts, 0.01, e, h);
    benchmark::DoNotOptimize(e.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(sources * points));
}

}  // namespace

BENCHMARK(wedge<false>)->Name("wedge/serial")->Arg(32)->Arg(64);
BENCHMARK(wedge<true>)->Name("wedge/parallel")->Arg(32)->Arg(64);
BENCHMARK(interior<false>)->Name("interior/serial")->Arg(32)->Arg(64);
BENCHMARK(interior<true>)->Name("interior/parallel")->Arg(32)->Arg(64);
BENCHMARK(weighted_inner<false>)->Name("weighted_inner/serial")->Arg(32)->Arg(64);
BENCHMARK(weighted_inner<true>)->Name("weighted_inner/parallel")->Arg(32)->Arg(64);
BENCHMARK(mode_solve<false>)->Name("mode_solve/serial")->Arg(32)->Arg(64);
BENCHMARK(mode_solve<true>)->Name("mode_solve/parallel")->Arg(32)->Arg(64);
BENCHMARK(representation<false>)->Name("representation/serial")->Arg(1024)->Arg(4096);
BENCHMARK(representation<true>)->Name("representation/parallel")->Arg(1024)->Arg(4096);

int main(int argc, char** argv) {
  if (const char* env = std::getenv("FORMWAVE_THREADS")) kernels::set_thread_count(std::atoi(env));
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
