#include <benchmark/benchmark.h>

#include "capkit/capacity.hpp"
#include "capkit/content.hpp"
#include "capkit/operators.hpp"

using namespace capkit;

namespace {

PointSet middle_ball(const Space& s, double r) { return ball(s, static_cast<int>(s.size() / 2), r, true); }

void BM_estimate_stats(benchmark::State& st) {
    const Space s = build_grid(1, static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(estimate_stats(s));
}
BENCHMARK(BM_estimate_stats)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_potential_H(benchmark::State& st) {
    const Space s = build_grid(1, static_cast<int>(st.range(0)));
    ScaleSequence f(scale_window(s), s.size());
    for (std::size_t i = 0; i < f.head.size(); ++i)
        f.head[i] = static_cast<double>(i % 7) / 7;
    for (auto _ : st)
        benchmark::DoNotOptimize(potential_H(s, f, 0.5));
}
BENCHMARK(BM_potential_H)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_hdual(benchmark::State& st) {
    const Space s = build_grid(1, static_cast<int>(st.range(0)));
    PointMeasure nu(s.size(), 0.0);
    for (int x : middle_ball(s, 0.1))
        nu[x] = 1;
    for (auto _ : st)
        benchmark::DoNotOptimize(hdual_norm(s, hdual_sequence(s, nu, 0.5, 2), 2));
}
BENCHMARK(BM_hdual)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_cap_tl(benchmark::State& st) {
    const Space s = build_grid(1, static_cast<int>(st.range(0)));
    const PointSet e = middle_ball(s, 0.1);
    CapacityParams prm;
    for (auto _ : st)
        benchmark::DoNotOptimize(cap_tl_primal(s, e, prm).value);
}
BENCHMARK(BM_cap_tl)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

void BM_cap_relative(benchmark::State& st) {
    const Space s = build_grid(1, static_cast<int>(st.range(0)));
    const double r = 1.0 / 16;
    const PointSet e = middle_ball(s, r);
    CapacityParams prm;
    prm.q = kInf;
    SolverOptions opt;
    opt.tol = 1e-4;
    for (auto _ : st)
        benchmark::DoNotOptimize(cap_relative(s, e, static_cast<int>(s.size() / 2), r, prm, opt).value);
}
BENCHMARK(BM_cap_relative)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

void BM_content_exact(benchmark::State& st) {
    const CantorSpace c = build_cantor(1.0 / 3, static_cast<int>(st.range(0)));
    const PointSet f(c.set.begin(), c.set.begin() + std::min<std::size_t>(16, c.set.size()));
    for (auto _ : st)
        benchmark::DoNotOptimize(content_exact(c.space, f, {0.37, 0.2}).total);
}
BENCHMARK(BM_content_exact)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
