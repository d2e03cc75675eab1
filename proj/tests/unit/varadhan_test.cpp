#include "../oracles.hpp"
#include "../support.hpp"

#include <colocal/varadhan.hpp>

using namespace colocal;
using namespace support;

namespace {

const StateMeasure<Q> kHalf = StateMeasure<Q>::bernoulli(Q(1, 2));

std::vector<ConservedQuantity<Q>> exclusion_basis() {
    return conserved_quantities(Interaction::exclusion(), kHalf);
}

Cocycle<Q> cocycle(std::vector<std::vector<Q>> coefficients) {
    const int dim = static_cast<int>(coefficients.size());
    auto rho = Cocycle<Q>::zero(dim, exclusion_basis());
    rho.coefficients = std::move(coefficients);
    return rho;
}

// g_0 = η_0 η_1 on the lattice sites 0 and 1 (d = 1).
FnTable<Q> pair_stencil() {
    return table(space({0, 1}), [](auto st) { return st[0] * st[1]; });
}

}  // namespace

TEST_SUITE("varadhan") {

TEST_CASE("fundamental_domain") {
    const auto d1 = fundamental_domain(1);
    auto r = d1.represent({{3}});
    CHECK(r.shift == Coord{3});
    CHECK(r.sites == std::vector<Coord>{{0}});
    r = d1.represent({{4}, {2}});
    CHECK(r.shift == Coord{2});
    CHECK(r.sites == std::vector<Coord>{{0}, {2}});
    CHECK(d1.contains(r.sites));
    CHECK_FALSE(d1.contains({{1}, {2}}));

    const auto d2 = fundamental_domain(2);
    r = d2.represent({{1, 2}, {1, 1}});
    CHECK(r.shift == Coord{1, 1});
    CHECK(r.sites == std::vector<Coord>{{0, 0}, {0, 1}});
    CHECK_ERRC(d2.represent({}), Errc::EmptySet);

    // Every translate of a set has the same representative.
    oracle::Rng rng(301);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Coord> sites;
        for (int k = 0; k < 4; ++k) sites.push_back({rng.integer(-5, 5), rng.integer(-5, 5)});
        const Coord t{rng.integer(-9, 9), rng.integer(-9, 9)};
        auto moved = sites;
        for (auto& x : moved)
            for (int i = 0; i < 2; ++i) x[i] += t[i];
        CHECK(d2.represent(sites).sites == d2.represent(moved).sites);
        CHECK(d2.contains(d2.represent(sites).sites));
    }
}

TEST_CASE("theta_from_cocycle") {
    const auto w = lattice_window(1, 2);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto theta = theta_from_cocycle(cocycle({{Q(1)}}), g);
    // θ = Σ n ξ(η_n) with ξ = (-1/2, 1/2).
    const auto expected = FnTable<Q>::tabulate(g.space(), [](std::span<const State> st) {
        Q total(0);
        for (int n = -2; n <= 2; ++n) total += Q(n) * (st[static_cast<std::size_t>(n + 2)] ? Q(1, 2) : Q(-1, 2));
        return total;
    });
    CHECK(theta.equals(expected));
    CHECK(theta_from_cocycle(cocycle({{Q(0)}}), g).is_zero());
    auto doubled = expected;
    doubled *= Q(2);
    CHECK(theta_from_cocycle(cocycle({{Q(2)}}), g).equals(doubled));

    const auto torus = lattice_torus({4});
    const TransitionGraph gt(torus, Interaction::exclusion(), torus.sites());
    CHECK_ERRC(theta_from_cocycle(cocycle({{Q(1)}}), gt), Errc::InvalidInput);
}

TEST_CASE("omega_from_cocycle is the density gradient") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto omega = omega_from_cocycle(cocycle({{Q(1)}}), g);
    for (const auto& e : g.edges()) {
        if (e.target != e.origin + 1) continue;
        const auto po = *g.sites().position(e.origin);
        const auto pt = *g.sites().position(e.target);
        for (ConfigIndex i = 0; i < g.space().size(); ++i)
            CHECK(omega.value(e, i) == Q(g.space().digit(i, po)) - Q(g.space().digit(i, pt)));
    }
    CHECK(omega_from_cocycle(cocycle({{Q(0)}}), g).is_zero());
    const auto sum = omega_from_cocycle(cocycle({{Q(1)}}), g) + omega_from_cocycle(cocycle({{Q(3, 2)}}), g);
    CHECK(sum.equals(omega_from_cocycle(cocycle({{Q(5, 2)}}), g)));
}

TEST_CASE("omega_from_cocycle is translation invariant") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto omega = omega_from_cocycle(cocycle({{Q(1)}}), g);
    const auto sigma = GroupElement::translation(w, {1});
    for (const auto& e : g.edges()) {
        if (e.origin > 2 || e.target > 2) continue;
        const Edge moved{e.origin + 1, e.target + 1};
        const auto here = conditional_expectation(omega.table(*g.edge_index(moved)), SiteSet{-3, -2, -1, 0, 1, 2, 3, 4}, half());
        const auto there = conditional_expectation(group_act(sigma, FnTable<Q>(conditional_expectation(
                                                                             omega.table(*g.edge_index(e)),
                                                                             SiteSet{-4, -3, -2, -1, 0, 1, 2, 3}, half()))),
                                                   SiteSet{-3, -2, -1, 0, 1, 2, 3, 4}, half());
        CHECK(here.equals(there));
    }
}

TEST_CASE("verify_cocycle_identity") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto report = verify_cocycle_identity(cocycle({{Q(1)}}), g, half(), 2);
    CHECK(report.holds);
    REQUIRE(report.checks.size() == 1);
    CHECK(report.checks[0].interior == SiteSet{-2, -1, 0, 1, 2});

    CHECK(verify_cocycle_identity(cocycle({{Q(0)}}), g, half(), 2).holds);
    CHECK(verify_cocycle_identity(cocycle({{Q(1)}}), g, half(), 2, {{0}}).holds);
    CHECK(verify_cocycle_identity(cocycle({{Q(1)}}), g, half(), 1, {{2}, {-1}}).holds);

    CHECK_ERRC(verify_cocycle_identity(cocycle({{Q(1)}}), g, half(), 0), Errc::WindowTooSmall);
    const auto tiny = lattice_window(1, 1);
    const TransitionGraph gt(tiny, Interaction::exclusion(), tiny.sites());
    CHECK_ERRC(verify_cocycle_identity(cocycle({{Q(1)}}), gt, half(), 2), Errc::WindowTooSmall);
}

TEST_CASE("decompose_invariant_form round trip") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega_from_cocycle(cocycle({{Q(1)}}), g), 2}, kHalf);
    CHECK(d.cocycle.coefficients == std::vector<std::vector<Q>>{{Q(1)}});
    CHECK(d.exact_part.is_zero());
    CHECK(d.exact_potential.is_zero());
    CHECK(d.potential_invariant);
}

TEST_CASE("exact invariant forms have zero cocycle") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto gfun = invariant_function(pair_stencil(), g, half());
    const auto omega = differential(gfun, g);
    const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega, 2}, kHalf);
    CHECK(d.cocycle.coefficients == std::vector<std::vector<Q>>{{Q(0)}});
    CHECK(d.exact_part.equals(omega));
    CHECK(differential(d.exact_potential, g).equals(omega));
    CHECK(d.potential_invariant);
}

TEST_CASE("mixtures recover both parts") {
    const auto w = lattice_window(1, 5);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto gfun = invariant_function(pair_stencil(), g, half());
    for (const Q c : {Q(1), Q(-3, 2), Q(7)}) {
        const auto omega = differential(gfun, g) + omega_from_cocycle(cocycle({{c}}), g);
        const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega, 2}, kHalf);
        CHECK(d.cocycle.coefficients == std::vector<std::vector<Q>>{{c}});
        CHECK(d.exact_part.equals(differential(gfun, g)));
        CHECK(d.potential_invariant);
    }
}

TEST_CASE("two-dimensional cocycles on a cross window") {
    const auto cross = lattice_cross(2, 3);
    const TransitionGraph g(cross, Interaction::exclusion(), cross.sites());
    for (const auto& coeff : std::vector<std::vector<std::vector<Q>>>{
             {{Q(1)}, {Q(0)}}, {{Q(0)}, {Q(1)}}, {{Q(2)}, {Q(-3)}}}) {
        const auto rho = cocycle(coeff);
        CHECK(verify_cocycle_identity(rho, g, half(), 2).holds);
        const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega_from_cocycle(rho, g), 2}, kHalf);
        CHECK(d.cocycle.coefficients == coeff);
        CHECK(d.exact_part.is_zero());
    }
}

TEST_CASE("independence of cocycle forms modulo exact forms") {
    const auto w = lattice_window(1, 4);
    const TransitionGraph g(w, Interaction::exclusion(), w.sites());
    const auto gfun = invariant_function(pair_stencil(), g, half());
    // a ω_ρ + ∂g is exact only for a = 0.
    for (const Q a : {Q(1), Q(-2)}) {
        auto omega = omega_from_cocycle(cocycle({{a}}), g);
        omega += differential(gfun, g);
        CHECK_FALSE(decompose_invariant_form(InvariantFormSpec<Q>{omega, 2}, kHalf).cocycle.coefficients[0][0] == 0);
    }
}

TEST_CASE("decompose_invariant_form errors") {
    const auto w = lattice_window(1, 3);
    const auto ex = Interaction::exclusion();
    const TransitionGraph g(w, ex, w.sites());

    const auto eta0 = FnTable<Q>::site_function(g.space(), 0, std::vector<Q>{Q(0), Q(1)});
    CHECK_ERRC(decompose_invariant_form(InvariantFormSpec<Q>{differential(eta0, g), 2}, kHalf), Errc::NotInvariant);

    // A nonzero value on one transition only: not closed.
    Form<Q> zero(g);
    auto stored = zero.stored_tables();
    const auto k = *g.edge_index(Edge{0, 1});
    std::size_t slot = 0;
    while (zero.stored_edges()[slot] != k) ++slot;
    // η with a particle at 0 and a hole at 1, and some particle elsewhere.
    Config c{g.sites(), {1, 0, 0, 1, 0, 0, 0}};
    const auto i = g.space().index_of(c);
    stored[slot][i] = 1;
    stored[slot][g.target(i, k)] = -1;
    CHECK_ERRC(decompose_invariant_form(InvariantFormSpec<Q>{Form<Q>(g, stored), 2}, kHalf), Errc::NotClosed);

    CHECK_ERRC(decompose_invariant_form(InvariantFormSpec<Q>{Form<Q>(g), 0}, kHalf), Errc::WindowTooSmall);
    const auto tiny = lattice_window(1, 1);
    const TransitionGraph gt(tiny, ex, tiny.sites());
    CHECK_ERRC(decompose_invariant_form(InvariantFormSpec<Q>{Form<Q>(gt), 2}, kHalf), Errc::WindowTooSmall);
}

TEST_CASE("trivial action on the kernel") {
    // Level-set indicators on Λ and on σΛ have equal projections onto the
    // common interior once the conserved values are matched.
    const auto w = lattice_window(1, 3);
    const auto ex = Interaction::exclusion();
    const SiteSet left{-3, -2, -1, 0, 1, 2};
    const SiteSet right{-2, -1, 0, 1, 2, 3};
    const TransitionGraph gl(w, ex, left);
    const TransitionGraph gr(w, ex, right);
    const auto kl = kernel_basis(gl, half().on(gl.space()));
    const auto kr = kernel_basis(gr, half().on(gr.space()));
    REQUIRE(kl.indicators.size() == kr.indicators.size());
    const auto sigma = GroupElement::translation(w, {1});
    const SiteSet common = left.intersect(right);
    for (std::size_t c = 0; c < kl.indicators.size(); ++c) {
        const auto moved = group_act(sigma, kl.indicators[c]);
        CHECK(moved.equals(kr.indicators[c]));
        CHECK(conditional_expectation(moved, common, half())
                  .equals(conditional_expectation(kr.indicators[c], common, half())));
    }
}

}  // TEST_SUITE
