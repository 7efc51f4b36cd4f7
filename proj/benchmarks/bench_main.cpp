#include <benchmark/benchmark.h>

#include <cmath>

#include "arccrit/inner.hpp"
#include "arccrit/mesh.hpp"
#include "arccrit/sampling.hpp"
#include "arccrit/series.hpp"

using namespace arccrit;

namespace {

PuiseuxSeries bench_series(int terms)
{
    // t + sum_k (-1)^k / (k + 1) t^(1 + k/4)
    std::vector<Term> out;
    for (int k = 0; k < terms; ++k) {
        Coeff c(k % 2 == 0 ? 1 : -1, k + 1);
        c.canonicalize();
        out.push_back(Term{Exponent(4 + k, 4), c});
    }
    return PuiseuxSeries(std::move(out), kDefaultTruncation);
}

void BM_SeriesMultiply(benchmark::State& state)
{
    const PuiseuxSeries f = bench_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(f * f);
    }
}
BENCHMARK(BM_SeriesMultiply)->Arg(4)->Arg(8)->Arg(16);

void BM_SeriesSqrt(benchmark::State& state)
{
    const PuiseuxSeries f = bench_series(static_cast<int>(state.range(0)));
    const PuiseuxSeries sq = f * f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqrt(sq));
    }
}
BENCHMARK(BM_SeriesSqrt)->Arg(4)->Arg(8);

void BM_CompInverse(benchmark::State& state)
{
    const PuiseuxSeries f = bench_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(comp_inverse(f));
    }
}
BENCHMARK(BM_CompInverse)->Arg(4)->Arg(8);

void BM_MeshBuild(benchmark::State& state)
{
    const GermModel g = builtin("complex_cusp");
    const double t = 1.0 / 64;
    const double divisor = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mesh_at_scale(g, t, t / divisor));
    }
}
BENCHMARK(BM_MeshBuild)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MeshGeodesic(benchmark::State& state)
{
    const GermModel g = builtin("complex_cusp");
    const double t = 1.0 / 64;
    const PointGraph m = mesh_at_scale(g, t, t / 64);
    const LocatedPoint x = point_on_ray(g, ParameterRay{0, 0.25, 0.0}, t);
    const LocatedPoint y = point_on_ray(g, ParameterRay{1, 0.25, 0.0}, t);
    for (auto _ : state) {
        benchmark::DoNotOptimize(m.distance(x, y));
    }
}
BENCHMARK(BM_MeshGeodesic)->Unit(benchmark::kMillisecond);

void BM_PancakeDistance(benchmark::State& state)
{
    const GermModel g = builtin("horn");
    const LocatedPoint x = point_on_ray(g, ParameterRay{0, 0.3, 0.0}, 1e-3);
    const LocatedPoint y = point_on_ray(g, ParameterRay{1, -0.4, 0.0}, 2e-3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pancake_distance(g, x, y));
    }
}
BENCHMARK(BM_PancakeDistance);

void BM_InnerContactOrder(benchmark::State& state)
{
    const GermModel g = builtin("cusp");
    const auto arcs = sample_arcs(g, 2, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(inner_contact_order(g, arcs[0], arcs[1]));
    }
}
BENCHMARK(BM_InnerContactOrder)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
