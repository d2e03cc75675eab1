#include <colocal/linalg.hpp>
#include <colocal/varadhan.hpp>

#include <algorithm>
#include <string>

namespace colocal {
namespace {

const LatticeInfo& require_open_lattice(const Locale& locale) {
    const auto& lattice = locale.lattice();
    if (!lattice) throw Error(Errc::InvalidInput, "translations need a lattice window");
    if (lattice->shape == LatticeInfo::Shape::Torus)
        throw Error(Errc::InvalidInput, "cocycle potentials are not defined on a torus");
    return *lattice;
}

Coord unit(int dim, int axis) {
    Coord c(static_cast<std::size_t>(dim), 0);
    c[static_cast<std::size_t>(axis)] = 1;
    return c;
}

// τ(f): the same values carried to the translated sites. Translations keep
// the id order, so the mixed-radix layout is unchanged.
template <class T>
FnTable<T> translate(const FnTable<T>& f, SiteId offset) {
    std::vector<SiteId> ids;
    ids.reserve(f.sites().size());
    for (const auto x : f.sites()) ids.push_back(x + offset);
    return FnTable<T>(ConfigSpace(SiteSet(std::move(ids)), f.space().num_states(), f.size()), f.values());
}

SiteSet translate(const SiteSet& sites, SiteId offset) {
    std::vector<SiteId> ids;
    for (const auto x : sites) ids.push_back(x + offset);
    return SiteSet(std::move(ids));
}

std::vector<Coord> default_shifts(int dim, std::vector<Coord> shifts) {
    if (!shifts.empty()) return shifts;
    for (int i = 0; i < dim; ++i) shifts.push_back(unit(dim, i));
    return shifts;
}

// Σ_j coeff_j ξ_j(η_x) summed over the window.
template <class T>
FnTable<T> conserved_combination(const std::vector<ConservedQuantity<T>>& basis, const std::vector<T>& coeff,
                                 const ConfigSpace& space) {
    FnTable<T> out(space);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (is_zero(coeff[j])) continue;
        auto term = conserved_colocal(basis[j], space);
        term *= coeff[j];
        out += term;
    }
    return out;
}

// π^W(f - τf) for f on Λ and W ⊂ Λ ∩ τΛ.
template <class T>
FnTable<T> shift_difference(const FnTable<T>& f, SiteId offset, const SiteSet& w, const ProductMeasure<T>& mu) {
    auto diff = conditional_expectation(f, w, mu);
    diff -= conditional_expectation(translate(f, offset), w, mu);
    return diff;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fundamental domain
// ---------------------------------------------------------------------------

FundamentalDomain::FundamentalDomain(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxLatticeDim)
        throw Error(Errc::InvalidInput, "lattice dimension must be between 1 and " + std::to_string(kMaxLatticeDim));
}

FundamentalDomain::Representative FundamentalDomain::represent(std::vector<Coord> sites) const {
    if (sites.empty()) throw Error(Errc::EmptySet, "the empty set has no representative");
    for (const auto& x : sites)
        if (static_cast<int>(x.size()) != dim_) throw Error(Errc::InvalidInput, "coordinate of the wrong dimension");
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    Representative rep{sites.front(), {}};
    for (auto x : sites) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= rep.shift[i];
        rep.sites.push_back(std::move(x));
    }
    return rep;
}

bool FundamentalDomain::contains(const std::vector<Coord>& sites) const {
    if (sites.empty()) return false;
    const auto smallest = *std::min_element(sites.begin(), sites.end());
    return std::all_of(smallest.begin(), smallest.end(), [](std::int64_t c) { return c == 0; }) &&
           static_cast<int>(smallest.size()) == dim_;
}

FundamentalDomain fundamental_domain(int dim) { return FundamentalDomain(dim); }

// ---------------------------------------------------------------------------
// Cocycles
// ---------------------------------------------------------------------------

template <class T>
Cocycle<T> Cocycle<T>::zero(int dim, std::vector<ConservedQuantity<T>> basis) {
    Cocycle out{dim, std::move(basis), {}};
    out.coefficients.assign(static_cast<std::size_t>(dim), std::vector<T>(out.basis.size(), T(0)));
    return out;
}

template <class T>
std::vector<T> Cocycle<T>::image(const Coord& tau) const {
    if (static_cast<int>(tau.size()) != dim) throw Error(Errc::InvalidInput, "shift of the wrong dimension");
    std::vector<T> out(basis.size(), T(0));
    for (std::size_t i = 0; i < tau.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) out[j] += T(static_cast<long>(tau[i])) * coefficients[i][j];
    return out;
}

template <class T>
bool Cocycle<T>::equals(const Cocycle& other) const {
    if (dim != other.dim || basis.size() != other.basis.size()) return false;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (!approx_equal(coefficients[i][j], other.coefficients[i][j])) return false;
    return true;
}

SiteSet interior(const Locale& locale, const SiteSet& sites, const Coord& tau, int margin) {
    const auto& lattice = locale.lattice();
    if (!lattice) throw Error(Errc::InvalidInput, "interiors need a lattice window");
    if (static_cast<int>(tau.size()) != lattice->dim) throw Error(Errc::InvalidInput, "shift of the wrong dimension");
    const SiteId offset = encode_coord(tau);
    std::vector<SiteId> kept;
    for (const auto x : sites) {
        bool inside = true;
        for (int k = -margin; k <= margin && inside; ++k) inside = sites.contains(x + k * offset);
        if (inside) kept.push_back(x);
    }
    return SiteSet(std::move(kept));
}

template <class T>
FnTable<T> theta_from_cocycle(const Cocycle<T>& rho, const TransitionGraph& graph) {
    const auto& lattice = require_open_lattice(graph.locale());
    if (lattice.dim != rho.dim) throw Error(Errc::InvalidInput, "cocycle and lattice differ in dimension");
    const auto& space = graph.space();
    const std::size_t n = space.num_states();
    // h[p][s] = Σ_j ρ(x_p)_j ξ_j(s).
    std::vector<std::vector<T>> h(space.sites().size(), std::vector<T>(n, T(0)));
    for (std::size_t p = 0; p < space.sites().size(); ++p) {
        const auto coeff = rho.image(decode_coord(space.sites()[p], lattice.dim));
        for (std::size_t j = 0; j < rho.basis.size(); ++j)
            for (std::size_t s = 0; s < n; ++s) h[p][s] += coeff[j] * rho.basis[j].xi[s];
    }
    FnTable<T> out(space);
    for (ConfigIndex i = 0; i < space.size(); ++i) {
        T total(0);
        ConfigIndex rest = i;
        for (std::size_t p = 0; p < h.size(); ++p) {
            total += h[p][rest % n];
            rest /= n;
        }
        out[i] = total;
    }
    return out;
}

template <class T>
Form<T> omega_from_cocycle(const Cocycle<T>& rho, const TransitionGraph& graph) {
    return differential(theta_from_cocycle(rho, graph), graph);
}

template <class T>
FnTable<T> invariant_function(const FnTable<T>& stencil, const TransitionGraph& graph, const ProductMeasure<T>& mu) {
    const auto& lattice = require_open_lattice(graph.locale());
    if (stencil.space().num_states() != graph.space().num_states())
        throw Error(Errc::InvalidInput, "stencil and window use different state sets");
    const T mean = expectation(stencil, mu);
    const auto& window = graph.sites();

    std::vector<SiteId> offsets;
    for (const auto x : window)
        for (const auto s : stencil.sites()) offsets.push_back(x - s);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    FnTable<T> out(graph.space());
    for (const auto offset : offsets) {
        // Offsets are differences of encoded points, hence encoded shifts.
        (void)decode_coord(offset, lattice.dim);
        const auto moved = translate(stencil, offset);
        const SiteSet overlap = moved.sites().intersect(window);
        if (overlap.empty()) continue;
        auto local = conditional_expectation(moved, overlap, mu);
        local += T(-mean);
        out += local.lift(graph.space());
    }
    return out;
}

template <class T>
CocycleReport<T> verify_cocycle_identity(const Cocycle<T>& rho, const TransitionGraph& graph,
                                         const ProductMeasure<T>& mu, int margin, std::vector<Coord> shifts) {
    if (margin < 1) throw Error(Errc::WindowTooSmall, "the interior margin must be at least 1");
    const auto& lattice = require_open_lattice(graph.locale());
    const auto theta = theta_from_cocycle(rho, graph);
    CocycleReport<T> report;
    for (const auto& tau : default_shifts(lattice.dim, std::move(shifts))) {
        const SiteSet w = interior(graph.locale(), graph.sites(), tau, margin);
        if (w.empty()) throw Error(Errc::WindowTooSmall, "the window has no interior for this shift");
        const auto diff = shift_difference(theta, encode_coord(tau), w, mu);
        const auto expected = conserved_combination(rho.basis, rho.image(tau), diff.space());
        CocycleCheck<T> check{tau, w, diff.equals(expected)};
        report.holds = report.holds && check.holds;
        report.checks.push_back(std::move(check));
    }
    return report;
}

template <class T>
Decomposition<T> decompose_invariant_form(const InvariantFormSpec<T>& spec, const StateMeasure<T>& nu) {
    const auto& omega = spec.form;
    const auto& graph = omega.graph();
    const auto& locale = graph.locale();
    const auto& lattice = require_open_lattice(locale);
    if (spec.margin < 1) throw Error(Errc::WindowTooSmall, "the interior margin must be at least 1");
    if (nu.num_states() != graph.space().num_states())
        throw Error(Errc::InvalidMeasure, "measure and state set differ in size");
    const ProductMeasure<T> mu(nu);
    const auto window_measure = mu.on(graph.space());

    auto solved = solve_potential(omega, window_measure);
    if (!solved.closed)
        throw Error(Errc::NotClosed, "form integrates to " + scalar_traits<T>::format(*solved.witness_integral) +
                                         " around a closed path");
    FnTable<T> theta = std::move(*solved.potential);

    const auto shifts = default_shifts(lattice.dim, {});

    // Translation invariance, compared edge by edge on Λ ∩ σΛ.
    for (const auto& tau : shifts) {
        const SiteId offset = encode_coord(tau);
        const SiteSet overlap = graph.sites().intersect(translate(graph.sites(), offset));
        for (const auto& e : locale.edges_within(overlap)) {
            const auto k = graph.edge_index(e);
            const auto source = graph.edge_index(Edge{e.origin - offset, e.target - offset});
            if (!k || !source) throw Error(Errc::NotInvariant, "translated edge leaves the window");
            const auto here = conditional_expectation(omega.table(*k), overlap, mu);
            const auto moved = conditional_expectation(translate(omega.table(*source), offset), overlap, mu);
            if (!here.equals(moved))
                throw Error(Errc::NotInvariant, "ω_e differs from its translate on edge (" + std::to_string(e.origin) +
                                                    "," + std::to_string(e.target) + ")");
        }
    }

    auto basis = conserved_quantities(graph.interaction(), nu);
    auto rho = Cocycle<T>::zero(lattice.dim, basis);
    std::vector<SiteSet> interiors;
    for (std::size_t axis = 0; axis < shifts.size(); ++axis) {
        const SiteSet w = interior(locale, graph.sites(), shifts[axis], spec.margin);
        if (w.empty()) throw Error(Errc::WindowTooSmall, "the window has no interior for this shift");
        const auto residue = shift_difference(theta, encode_coord(shifts[axis]), w, mu);
        if (basis.empty()) {
            if (!residue.is_zero()) throw Error(Errc::ResidueNotConserved, "θ - σθ is nonzero with no conserved quantity");
        } else {
            Matrix<T> system(residue.size(), basis.size());
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const auto column = conserved_colocal(basis[j], residue.space());
                for (ConfigIndex i = 0; i < residue.size(); ++i) system(i, j) = column[i];
            }
            auto solution = solve_linear(system, residue.values());
            if (!solution) throw Error(Errc::ResidueNotConserved, "θ - σθ is not a conserved quantity on the interior");
            rho.coefficients[axis] = std::move(*solution);
        }
        interiors.push_back(w);
    }

    const auto theta_rho = theta_from_cocycle(rho, graph);
    FnTable<T> exact_potential = theta;
    exact_potential -= theta_rho;
    {
        // Centred on each communicating class, so the gauge is fixed.
        const auto labels = graph.component_labels();
        std::uint32_t classes = 0;
        for (const auto l : labels) classes = std::max(classes, l + 1);
        std::vector<T> mass(classes, T(0)), total(classes, T(0));
        const auto& weights = window_measure.weights();
        for (ConfigIndex i = 0; i < exact_potential.size(); ++i) {
            mass[labels[i]] += weights[i];
            total[labels[i]] += T(weights[i] * exact_potential[i]);
        }
        for (ConfigIndex i = 0; i < exact_potential.size(); ++i)
            exact_potential[i] -= T(total[labels[i]] / mass[labels[i]]);
    }
    Form<T> exact_part = omega;
    exact_part -= differential(theta_rho, graph);

    bool invariant = true;
    for (std::size_t axis = 0; axis < shifts.size(); ++axis)
        invariant = invariant &&
                    shift_difference(exact_potential, encode_coord(shifts[axis]), interiors[axis], mu).is_zero();

    return Decomposition<T>{std::move(rho),          std::move(exact_part), std::move(exact_potential),
                            std::move(theta),        invariant,             std::move(interiors)};
}

#define COLOCAL_INSTANTIATE(T)                                                                                  \
    template struct Cocycle<T>;                                                                                 \
    template FnTable<T> theta_from_cocycle(const Cocycle<T>&, const TransitionGraph&);                          \
    template Form<T> omega_from_cocycle(const Cocycle<T>&, const TransitionGraph&);                             \
    template FnTable<T> invariant_function(const FnTable<T>&, const TransitionGraph&, const ProductMeasure<T>&); \
    template CocycleReport<T> verify_cocycle_identity(const Cocycle<T>&, const TransitionGraph&,                 \
                                                      const ProductMeasure<T>&, int, std::vector<Coord>);       \
    template Decomposition<T> decompose_invariant_form(const InvariantFormSpec<T>&, const StateMeasure<T>&);

COLOCAL_INSTANTIATE(Rational)
COLOCAL_INSTANTIATE(double)

}  // namespace colocal
