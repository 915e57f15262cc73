#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "illiq/analysis.hpp"

using namespace illiq;
using namespace illiq::test;

namespace {

MarketInstance bench_instance(unsigned seed, bool books) {
    Rng rng(seed);
    InstanceConfig cfg;
    cfg.allow_books = books;
    return random_polyhedral_instance(rng, cfg);
}

void BM_lp_arbitrage_rational(benchmark::State& state) {
    const MarketInstance m = bench_instance(static_cast<unsigned>(state.range(0)), true);
    for (auto _ : state) {
        const ArbitrageVerdict v = check_arbitrage(m);
        benchmark::DoNotOptimize(v.lp_value);
    }
}
BENCHMARK(BM_lp_arbitrage_rational)->Arg(1)->Arg(2)->Arg(3);

void BM_lp_arbitrage_float(benchmark::State& state) {
    const MarketInstance m = bench_instance(static_cast<unsigned>(state.range(0)), true);
    AnalysisOptions opt;
    opt.float_mode = true;
    for (auto _ : state) {
        const ArbitrageVerdict v = check_arbitrage(m, opt);
        benchmark::DoNotOptimize(v.verdict);
    }
}
BENCHMARK(BM_lp_arbitrage_float)->Arg(1)->Arg(2)->Arg(3);

void BM_pwl_conjugate(benchmark::State& state) {
    Rng rng(7);
    std::vector<Pwl> funcs;
    for (int i = 0; i < 64; ++i) funcs.push_back(random_pwl(rng));
    size_t i = 0;
    for (auto _ : state) {
        const Pwl g = funcs[i++ % funcs.size()].conjugate();
        benchmark::DoNotOptimize(g.slopes());
    }
}
BENCHMARK(BM_pwl_conjugate);

void BM_deflator_search(benchmark::State& state) {
    const MarketInstance m = instance_exp_binomial(static_cast<int>(state.range(0)), Rat(2), rat(1, 2));
    for (auto _ : state) {
        const DeflatorSearch s = find_deflator(m, DeflatorKind::MarketPrice);
        benchmark::DoNotOptimize(s.found());
    }
}
BENCHMARK(BM_deflator_search)->Arg(2)->Arg(3)->Arg(4);

void BM_sigma_duality(benchmark::State& state) {
    Rng rng(11);
    const MarketInstance m = random_polyhedral_instance(rng);
    const ScalarProcess y = random_weights(rng, m.tree());
    for (auto _ : state) {
        const SigmaValue p = sigma_primal(m, y);
        const SigmaValue d = sigma_dual(m, y);
        benchmark::DoNotOptimize(p.value == d.value);
    }
}
BENCHMARK(BM_sigma_duality);

void BM_cone_convert(benchmark::State& state) {
    Rng rng(13);
    std::vector<PolyhedralCone> cones;
    for (int i = 0; i < 32; ++i)
        cones.push_back(random_constraint(rng, static_cast<int>(state.range(0)), InstanceConfig{})
                            .horizon_cone());
    size_t i = 0;
    for (auto _ : state) {
        const PolyhedralCone c = cone_convert(cones[i++ % cones.size()]);
        benchmark::DoNotOptimize(c.rays());
    }
}
BENCHMARK(BM_cone_convert)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
