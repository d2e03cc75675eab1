#include "oracles.hpp"

#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/l2.hpp>
#include <colocal/measure.hpp>
#include <colocal/varadhan.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

using namespace colocal;
using oracle::Q;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

Locale path(std::size_t n) {
    std::vector<SiteId> sites;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) sites.push_back(static_cast<SiteId>(i));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({static_cast<SiteId>(i), static_cast<SiteId>(i + 1)});
        edges.push_back({static_cast<SiteId>(i + 1), static_cast<SiteId>(i)});
    }
    return Locale::build(sites, edges);
}

Locale triangle() { return Locale::build({0, 1, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}}); }

ConfigSpace space_of(std::size_t n) { return ConfigSpace(path(n).sites(), 2); }

const std::vector<Q> kNuHalf{Q(1, 2), Q(1, 2)};

ProductMeasure<Q> half() { return ProductMeasure<Q>(StateMeasure<Q>::bernoulli(Q(1, 2))); }

// Weight of every configuration of n sites under ⊗ nu.
std::vector<Q> product_weights(std::size_t n_sites, const std::vector<Q>& nu) {
    std::vector<Q> w(oracle::ipow(nu.size(), n_sites), Q(1));
    for (std::size_t i = 0; i < w.size(); ++i)
        for (const int s : oracle::digits(i, nu.size(), n_sites)) w[i] *= nu[static_cast<std::size_t>(s)];
    return w;
}

Q weighted_sum(const std::vector<Q>& a, const std::vector<Q>& b, const std::vector<Q>& w) {
    Q s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] * w[i];
    return s;
}

std::vector<std::pair<std::size_t, std::size_t>> raw_edges(const Locale& l) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& e : l.edges())
        out.emplace_back(*l.sites().position(e.origin), *l.sites().position(e.target));
    return out;
}

Q rational_p(oracle::Rng& rng) {
    Q p(rng.integer(1, 9), 10);
    p.canonicalize();
    return p;
}

// 1. Conserved quantities of exclusion against a nullspace oracle.
Outcome conserved() {
    Outcome out;
    const auto ex = Interaction::exclusion();
    const auto basis = conserved_quantities(ex, StateMeasure<Q>::bernoulli(Q(1, 2)));
    oracle::Mat constraints;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            const auto [c, d] = ex.apply(static_cast<State>(a), static_cast<State>(b));
            oracle::Row row(2, Q(0));
            row[c] += 1;
            row[d] += 1;
            row[a] -= 1;
            row[b] -= 1;
            constraints.push_back(row);
        }
    constraints.push_back(kNuHalf);
    const std::size_t expected_dim = 2 - oracle::rank(constraints);
    out.require(basis.size() == 1, "basis size " + std::to_string(basis.size()));
    out.require(basis.size() == expected_dim, "oracle nullspace dimension " + std::to_string(expected_dim));
    if (basis.size() != 1) return out;
    const auto& xi = basis[0].xi;
    for (const auto& row : constraints) {
        if (row == kNuHalf) continue;
        out.require(row[0] * xi[0] + row[1] * xi[1] == 0, "ξ violates a transition constraint");
    }
    out.require(xi[1] - xi[0] == 1, "ξ(1) - ξ(0) = " + Q(xi[1] - xi[0]).get_str());
    out.require(Q(xi[0] + xi[1]) / 2 == 0, "E_ν[ξ] != 0");
    return out;
}

// 2. Expansion on random windows against the recursive oracle.
Outcome expansion() {
    Outcome out;
    oracle::Rng rng(2024);
    for (int trial = 0; trial < 100 && out.ok; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(1, 4));
        const auto s = space_of(n);
        const FnTable<Q> f(s, rng.values(s.size()));
        const auto e = expand_martingale(f, half());
        const auto reference = oracle::expansion(f.values(), n, kNuHalf);
        out.require(e.reconstruct(s).equals(f), "Σ f_A != f");
        for (const auto& [mask, comp] : e.components) {
            out.require(comp.values() == reference.at(mask), "component differs from the oracle");
            // π^B f_A vanishes unless A ⊂ B.
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
                if ((mask & b) == mask) continue;
                std::vector<std::size_t> keep;
                const auto pa = oracle::positions(mask);
                for (std::size_t k = 0; k < pa.size(); ++k)
                    if (b >> pa[k] & 1) keep.push_back(k);
                for (const auto& v : oracle::conditional(comp.values(), pa.size(), keep, kNuHalf))
                    out.require(v == 0, "π^B f_A != 0 for A ⊄ B");
            }
        }
    }
    const auto s = space_of(2);
    const FnTable<Q> xy(s, {Q(0), Q(0), Q(0), Q(1)});
    const auto e = expand_martingale(xy, half());
    out.require(e.component(3).values() == std::vector<Q>{Q(1, 4), Q(-1, 4), Q(-1, 4), Q(1, 4)},
                "f_xy != (η_x - 1/2)(η_y - 1/2)");
    return out;
}

// 3. Conditional expectation laws; ordinarity failure of the correlated measure.
Outcome conditional_laws() {
    Outcome out;
    oracle::Rng rng(77);
    const std::size_t n = 4;
    const auto big = space_of(n);
    for (int trial = 0; trial < 60 && out.ok; ++trial) {
        const Q p = rational_p(rng);
        const std::vector<Q> nu{Q(1) - p, p};
        const ProductMeasure<Q> mu(StateMeasure<Q>::bernoulli(p));
        const auto w = product_weights(n, nu);
        std::vector<SiteId> mid_sites, small_sites, a_sites, b_sites;
        for (SiteId x = 0; x < static_cast<SiteId>(n); ++x) {
            if (rng.integer(0, 1)) mid_sites.push_back(x);
            if (rng.integer(0, 1)) a_sites.push_back(x);
            if (rng.integer(0, 1)) b_sites.push_back(x);
        }
        for (const auto x : mid_sites)
            if (rng.integer(0, 1)) small_sites.push_back(x);
        const SiteSet mid(mid_sites), small(small_sites), a(a_sites), b(b_sites);
        const FnTable<Q> f(big, rng.values(big.size()));
        const FnTable<Q> g(big, rng.values(big.size()));

        std::vector<std::size_t> small_pos(small_sites.begin(), small_sites.end());
        const auto direct = conditional_expectation(f, small, mu);
        out.require(direct.values() == oracle::conditional(f.values(), n, small_pos, nu), "π differs from the oracle");
        out.require(conditional_expectation(conditional_expectation(f, mid, mu), small, mu).equals(direct), "tower fails");

        const auto pf = conditional_expectation(f, mid, mu).lift(big);
        const auto pg = conditional_expectation(g, mid, mu).lift(big);
        out.require(weighted_sum(pf.values(), g.values(), w) == weighted_sum(f.values(), pg.values(), w),
                    "π is not self-adjoint");
        out.require(conditional_expectation(pf, mid, mu).lift(big).equals(pf), "π is not idempotent");

        const auto lhs = conditional_expectation(conditional_expectation(f, b, mu).lift(big), a, mu);
        const auto rhs = conditional_expectation(f, a.intersect(b), mu).lift(lhs.space());
        out.require(lhs.equals(rhs), "intersection law fails under a product measure");
    }

    // Masses 2^{η_1 η_2} on sites 0, 1, 2; Z = 10.
    const auto s3 = space_of(3);
    std::vector<Q> masses(8, Q(1));
    masses[6] = masses[7] = 2;
    const auto corr = WindowMeasure<Q>::from_masses(s3, masses);
    const auto report = is_ordinary(corr, SiteSet{0, 1}, path(3), Interaction::exclusion());
    bool witnessed = false;
    for (const auto& v : report.violations)
        if (v.outer == 5 && v.edge == Edge{0, 1}) witnessed = v.lhs * 100 == 3 * 1 && v.rhs * 100 == 2 * 2;
    out.require(!report.ordinary, "correlated measure reported ordinary");
    out.require(witnessed, "missing witness 3·1 != 2·2");
    return out;
}

// 4. Dimensions, potentials and a non-closed form.
Outcome forms() {
    Outcome out;
    const auto ex = Interaction::exclusion();
    for (const auto& locale : {path(2), path(3), triangle()}) {
        const TransitionGraph g(locale, ex, locale.sites());
        const auto k = kernel_basis(g, half().on(g.space()));
        const auto ts = oracle::transitions(ex, locale.sites().size(), raw_edges(locale));
        const auto configs = g.space().size();
        out.require(k.dim_z1 == oracle::rank(oracle::differential_matrix(ts, configs)), "dim Z¹ != rank ∂");
        out.require(k.dim_z1 == k.dim_c0 - k.dim_kernel_c0, "dim Z¹ != dim C⁰ - dim(Ker ∂ ∩ C⁰)");
        out.require(k.dim_kernel == oracle::components(ts, configs), "component count differs from the oracle");
        if (locale.sites().size() == 2)
            out.require(k.dim_z1 == 1 && k.dim_c0 == 3 && k.dim_kernel_c0 == 2, "single edge is not 1 = 3 - 2");
    }

    oracle::Rng rng(404);
    const auto p3 = path(3);
    const TransitionGraph g(p3, ex, p3.sites());
    const auto ts = oracle::transitions(ex, 3, raw_edges(p3));
    const auto w = product_weights(3, kNuHalf);
    for (int trial = 0; trial < 100 && out.ok; ++trial) {
        const FnTable<Q> f(g.space(), rng.values(g.space().size()));
        const auto solved = solve_potential(differential(f, g), half().on(g.space()));
        out.require(solved.closed, "exact form reported non-closed");
        if (!solved.closed) break;
        const auto& p = *solved.potential;
        for (const auto& t : ts)
            out.require(p[t.to] - f[t.to] == p[t.from] - f[t.from], "potential - f is not in Ker ∂");
        out.require(weighted_sum(p.values(), std::vector<Q>(8, Q(1)), w) == 0, "potential is not mean zero");
    }

    // One-particle loop 1 → 2 → 4 → 1 on the triangle with integral 3.
    const auto tri = triangle();
    const TransitionGraph gt(tri, ex, tri.sites());
    const Form<Q> zero(gt);
    std::vector<FnTable<Q>> stored;
    for (const auto k : zero.stored_edges()) {
        const Edge e = gt.edges()[k];
        std::vector<Q> v(8, Q(0));
        if (e == Edge{0, 1}) v[1] = 1, v[2] = -1;
        if (e == Edge{1, 2}) v[2] = 1, v[4] = -1;
        if (e == Edge{0, 2}) v[1] = -1, v[4] = 1;
        stored.emplace_back(gt.space(), v);
    }
    const Form<Q> omega(gt, stored);
    const auto result = solve_potential(omega, half().on(gt.space()));
    out.require(!result.closed && result.witness.has_value(), "non-closed form accepted");
    if (result.witness) {
        std::size_t at = result.witness->start;
        Q total(0);
        for (const auto& e : result.witness->edges) {
            total += omega.value(e, at);
            auto d = oracle::digits(at, 2, 3);
            std::swap(d[static_cast<std::size_t>(e.origin)], d[static_cast<std::size_t>(e.target)]);
            out.require(oracle::undigits(d, 2) != at, "witness step is not a transition");
            at = oracle::undigits(d, 2);
        }
        out.require(at == result.witness->start, "witness path is not closed");
        out.require(total != 0 && total == *result.witness_integral, "witness integral is zero or misreported");
    }
    return out;
}

Cocycle<Q> cocycle(std::vector<std::vector<Q>> coefficients) {
    auto rho = Cocycle<Q>::zero(static_cast<int>(coefficients.size()),
                                conserved_quantities(Interaction::exclusion(), half().base()));
    rho.coefficients = std::move(coefficients);
    return rho;
}

// 5. Cocycle decomposition round trips in one and two dimensions.
Outcome varadhan() {
    Outcome out;
    const auto ex = Interaction::exclusion();
    for (const std::int64_t radius : {4, 5}) {
        const auto w = lattice_window(1, radius);
        const TransitionGraph g(w, ex, w.sites());
        const auto omega = omega_from_cocycle(cocycle({{Q(1)}}), g);
        const auto inner = interior(w, w.sites(), {1}, 2);
        const auto n_sites = g.sites().size();
        for (const auto& e : g.edges()) {
            if (e.target != e.origin + 1 || !inner.contains(e.origin) || !inner.contains(e.target)) continue;
            const auto po = *g.sites().position(e.origin);
            const auto pt = *g.sites().position(e.target);
            for (ConfigIndex i = 0; i < g.space().size(); ++i) {
                const auto d = oracle::digits(i, 2, n_sites);
                if (d[po] == d[pt]) continue;
                out.require(omega.value(e, i) == d[po] - d[pt], "ω_e != η_n - η_{n+1}");
            }
        }
        const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega, 2}, half().base());
        out.require(d.cocycle.coefficients == std::vector<std::vector<Q>>{{Q(1)}}, "coefficient is not 1");
        out.require(d.exact_part.is_zero(), "nonzero residual");

        // g_0 = η_0 η_1.
        const FnTable<Q> stencil(ConfigSpace(SiteSet{0, 1}, 2), {Q(0), Q(0), Q(0), Q(1)});
        const auto exact = differential(invariant_function(stencil, g, half()), g);
        for (const Q c : {Q(-3, 2), Q(2)}) {
            const auto mixed = decompose_invariant_form(InvariantFormSpec<Q>{exact + omega_from_cocycle(cocycle({{c}}), g), 2},
                                                        half().base());
            out.require(mixed.cocycle.coefficients == std::vector<std::vector<Q>>{{c}}, "mixture coefficient lost");
            out.require(mixed.exact_part.equals(exact), "mixture exact part lost");
        }
    }
    const auto cross = lattice_cross(2, 3);
    const TransitionGraph g2(cross, ex, cross.sites());
    for (const auto& coeff : std::vector<std::vector<std::vector<Q>>>{{{Q(1)}, {Q(0)}}, {{Q(0)}, {Q(1)}}, {{Q(2)}, {Q(-3)}}}) {
        const auto d = decompose_invariant_form(InvariantFormSpec<Q>{omega_from_cocycle(cocycle(coeff), g2), 2}, half().base());
        out.require(d.cocycle.coefficients == coeff, "two-dimensional coefficients not recovered");
        out.require(d.exact_part.is_zero(), "two-dimensional residual is nonzero");
    }
    return out;
}

// 6. IQ checker.
Outcome iq() {
    Outcome out;
    const std::vector<Locale> locales{path(2), path(3), triangle()};
    const auto nu = StateMeasure<Q>::bernoulli(Q(1, 2));
    const auto ex = Interaction::exclusion();
    const auto pass = check_iq(ex, nu, locales);
    out.require(pass.holds, "exclusion fails IQ");
    for (std::size_t i = 0; i < locales.size(); ++i) {
        const auto n = locales[i].sites().size();
        const auto& r = pass.locales[i];
        const auto comps = oracle::components(oracle::transitions(ex, n, raw_edges(locales[i])), oracle::ipow(2, n));
        out.require(r.components == comps && r.level_sets == n + 1 && r.components == r.level_sets,
                    "components are not the particle-number level sets");
    }
    const auto id = Interaction::identity(2);
    const auto fail = check_iq(id, nu, locales);
    out.require(!fail.holds, "identity passes IQ");
    bool witnessed = false;
    for (std::size_t i = 0; i < locales.size(); ++i) {
        const auto& r = fail.locales[i];
        if (!r.witness) continue;
        const auto n = locales[i].sites().size();
        const auto a = oracle::digits(r.witness->first, 2, n);
        const auto b = oracle::digits(r.witness->second, 2, n);
        int sa = 0, sb = 0;
        for (std::size_t k = 0; k < n; ++k) sa += a[k], sb += b[k];
        const bool isolated = oracle::transitions(id, n, raw_edges(locales[i])).empty();
        witnessed = witnessed || (sa == sb && a != b && isolated);
    }
    out.require(witnessed, "no valid disconnected level-set witness");
    return out;
}

// 7. Martingale chains.
Outcome martingale() {
    Outcome out;
    const FnTable<Q> xy(space_of(2), {Q(0), Q(0), Q(0), Q(1)});
    const auto r = martingale_chain_report(xy, {SiteSet{0}, SiteSet{0, 1}}, half());
    out.require(r.norms[0].squared == Q(1, 8) && r.norms[1].squared == Q(1, 4) && r.gaps[0].squared == Q(1, 8),
                "norms are not (1/8, 1/4) with gap 1/8");

    oracle::Rng rng(7);
    const auto big = space_of(4);
    const std::vector<std::vector<std::size_t>> chain_pos{{1}, {1, 3}, {0, 1, 3}, {0, 1, 2, 3}};
    std::vector<SiteSet> chain;
    for (const auto& c : chain_pos) chain.push_back(SiteSet(std::vector<SiteId>(c.begin(), c.end())));
    for (int trial = 0; trial < 100 && out.ok; ++trial) {
        const Q p = rational_p(rng);
        const std::vector<Q> nu{Q(1) - p, p};
        const FnTable<Q> f(big, rng.values(big.size()));
        const auto rep = martingale_chain_report(f, chain, ProductMeasure<Q>(StateMeasure<Q>::bernoulli(p)));
        out.require(rep.monotone && rep.pythagoras, "monotonicity or Pythagoras flag is false");
        std::vector<Q> norms;
        for (const auto& c : chain_pos) {
            const auto fn = oracle::conditional(f.values(), 4, c, nu);
            norms.push_back(weighted_sum(fn, fn, product_weights(c.size(), nu)));
        }
        for (std::size_t k = 0; k < norms.size(); ++k)
            out.require(rep.norms[k].squared == norms[k], "norm differs from the oracle");
        for (std::size_t k = 0; k + 1 < norms.size(); ++k) {
            out.require(norms[k] <= norms[k + 1], "oracle norms decrease");
            out.require(norms[k + 1] == norms[k] + rep.gaps[k].squared, "Pythagoras fails against the oracle");
        }
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// 8. Repeated CLI runs are byte-identical.
Outcome determinism() {
    Outcome out;
    const std::string cli = COLOCAL_CLI_PATH;
    const std::string data = COLOCAL_DATA_DIR;
    const std::vector<std::pair<std::string, std::string>> runs{
        {"conserved", "exclusion_conserved"}, {"iq", "iq_identity"},       {"dims", "single_edge_dims"},
        {"expand", "expand_pair"},            {"project", "project_function"}, {"closed", "closed_triangle"},
        {"varadhan", "varadhan_d1"},          {"varadhan", "varadhan_d2"}, {"martingale", "martingale_pair"}};
    for (const auto& [command, input] : runs) {
        std::string outputs[2];
        for (int k = 0; k < 2; ++k) {
            const std::string target = "acceptance_" + input + "_" + std::to_string(k) + ".json";
            const std::string line = "\"" + cli + "\" " + command + " --input \"" + data + "/" + input +
                                     ".json\" --output " + target;
            out.require(std::system(line.c_str()) == 0, command + " on " + input + " did not exit 0");
            outputs[k] = slurp(target);
            std::remove(target.c_str());
        }
        out.require(!outputs[0].empty() && outputs[0] == outputs[1], command + " on " + input + " is not reproducible");
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double limit_seconds;  // 0: no limit
    };
    const std::vector<Criterion> criteria{
        {1, "conserved quantities of exclusion", conserved, 1.0},
        {2, "martingale expansion", expansion, 5.0},
        {3, "conditional expectation laws", conditional_laws, 0.0},
        {4, "forms, dimensions and potentials", forms, 0.0},
        {5, "cocycle decomposition round trip", varadhan, 30.0},
        {6, "irreducible quantification checker", iq, 0.0},
        {7, "martingale convergence", martingale, 0.0},
        {8, "deterministic CLI output", determinism, 0.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.ok && c.limit_seconds > 0 && secs >= c.limit_seconds) {
            o.ok = false;
            o.detail = "over the time limit";
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(3);
        line << (o.ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << " (" << secs << " s";
        if (c.limit_seconds > 0) line << ", limit " << c.limit_seconds << " s";
        line << ")";
        if (!o.ok) line << ": " << o.detail;
        std::cout << line.str() << std::endl;
        failures += o.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
