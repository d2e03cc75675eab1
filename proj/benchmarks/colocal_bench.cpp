#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/l2.hpp>
#include <colocal/varadhan.hpp>

#include <benchmark/benchmark.h>

using namespace colocal;

namespace {

Locale path(std::int64_t n) {
    std::vector<SiteId> sites;
    std::vector<Edge> edges;
    for (SiteId x = 0; x < n; ++x) sites.push_back(x);
    for (SiteId x = 0; x + 1 < n; ++x) {
        edges.push_back({x, x + 1});
        edges.push_back({x + 1, x});
    }
    return Locale::build(sites, edges);
}

FnTable<Rational> pseudo_random(const ConfigSpace& space) {
    FnTable<Rational> f(space);
    std::uint64_t state = 12345;
    for (ConfigIndex i = 0; i < f.size(); ++i) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        f[i] = Rational(static_cast<long>(state >> 59) - 16, 7);
        f[i].canonicalize();
    }
    return f;
}

const ProductMeasure<Rational> kHalf(StateMeasure<Rational>::bernoulli(Rational(1, 2)));

void BM_ConditionalExpectation(benchmark::State& st) {
    const auto n = st.range(0);
    const ConfigSpace space(path(n).sites(), 2);
    const auto f = pseudo_random(space);
    const auto keep = space.sites().select((std::uint64_t{1} << (n / 2)) - 1);
    for (auto _ : st) benchmark::DoNotOptimize(conditional_expectation(f, keep, kHalf));
    st.SetComplexityN(static_cast<benchmark::IterationCount>(space.size()));
}
BENCHMARK(BM_ConditionalExpectation)->DenseRange(4, 12, 4)->Complexity();

void BM_ExpandMartingale(benchmark::State& st) {
    const ConfigSpace space(path(st.range(0)).sites(), 2);
    const auto f = pseudo_random(space);
    for (auto _ : st) benchmark::DoNotOptimize(expand_martingale(f, kHalf));
}
BENCHMARK(BM_ExpandMartingale)->DenseRange(4, 10, 2);

void BM_SolvePotential(benchmark::State& st) {
    const auto locale = path(st.range(0));
    const TransitionGraph g(locale, Interaction::exclusion(), locale.sites());
    const auto omega = differential(pseudo_random(g.space()), g);
    const auto mu = kHalf.on(g.space());
    for (auto _ : st) benchmark::DoNotOptimize(solve_potential(omega, mu));
}
BENCHMARK(BM_SolvePotential)->DenseRange(4, 12, 4);

void BM_KernelBasis(benchmark::State& st) {
    const auto locale = path(st.range(0));
    const TransitionGraph g(locale, Interaction::exclusion(), locale.sites());
    const auto mu = kHalf.on(g.space());
    for (auto _ : st) benchmark::DoNotOptimize(kernel_basis(g, mu));
}
BENCHMARK(BM_KernelBasis)->DenseRange(4, 12, 4);

void BM_DecomposeInvariantForm(benchmark::State& st) {
    const auto w = lattice_window(1, st.range(0));
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    auto rho = Cocycle<Rational>::zero(1, conserved_quantities(Interaction::exclusion(), kHalf.base()));
    rho.coefficients[0][0] = 1;
    const auto omega = omega_from_cocycle(rho, g);
    for (auto _ : st) benchmark::DoNotOptimize(decompose_invariant_form(InvariantFormSpec<Rational>{omega, 2}, kHalf.base()));
}
BENCHMARK(BM_DecomposeInvariantForm)->DenseRange(3, 5, 1)->Unit(benchmark::kMillisecond);

void BM_MartingaleChain(benchmark::State& st) {
    const auto n = st.range(0);
    const ConfigSpace space(path(n).sites(), 2);
    const auto f = pseudo_random(space);
    std::vector<SiteSet> chain;
    for (std::int64_t k = 1; k <= n; ++k) chain.push_back(space.sites().select((std::uint64_t{1} << k) - 1));
    for (auto _ : st) benchmark::DoNotOptimize(martingale_chain_report(f, chain, kHalf));
}
BENCHMARK(BM_MartingaleChain)->DenseRange(4, 12, 4);

}  // namespace

BENCHMARK_MAIN();
