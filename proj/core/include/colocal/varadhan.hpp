#pragma once

#include <colocal/fn_table.hpp>
#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/measure.hpp>
#include <colocal/state_space.hpp>

#include <vector>

namespace colocal {

/// Representatives of the Z^d-orbits of nonempty finite site sets: Λ_0 is a
/// representative iff its lexicographically smallest point is the origin.
class FundamentalDomain {
public:
    explicit FundamentalDomain(int dim);

    struct Representative {
        Coord shift;                // τ with Λ = τ(Λ_0)
        std::vector<Coord> sites;   // Λ_0, sorted lexicographically
    };

    int dim() const noexcept { return dim_; }
    /// Unique (τ, Λ_0). Throws EmptySet.
    Representative represent(std::vector<Coord> sites) const;
    bool contains(const std::vector<Coord>& sites) const;

private:
    int dim_;
};

FundamentalDomain fundamental_domain(int dim);

/// Homomorphism ρ: Z^d → span of a conserved basis, stored by the images
/// ρ(σ_i) of the unit translations: ρ(σ_i) = Σ_j coefficients[i][j] ξ_j,X.
template <class T>
struct Cocycle {
    int dim = 1;
    std::vector<ConservedQuantity<T>> basis;
    std::vector<std::vector<T>> coefficients;

    static Cocycle zero(int dim, std::vector<ConservedQuantity<T>> basis);
    /// Coefficients of ρ(τ) = Σ_i τ_i ρ(σ_i).
    std::vector<T> image(const Coord& tau) const;
    bool equals(const Cocycle& other) const;
};

/// Lattice sites of the window {x ∈ Λ : x + kτ ∈ Λ for all |k| <= margin}.
SiteSet interior(const Locale& locale, const SiteSet& sites, const Coord& tau, int margin);

/// Truncation of θ_ρ = Σ_τ ρ(τ)_τ to the window of `graph`:
/// θ^Λ(η) = Σ_{x ∈ Λ} Σ_j ρ(x)_j ξ_j(η_x). Requires a box or cross lattice
/// window. Throws InvalidInput.
template <class T>
FnTable<T> theta_from_cocycle(const Cocycle<T>& rho, const TransitionGraph& graph);

/// ω_ρ = ∂θ_ρ on the window.
template <class T>
Form<T> omega_from_cocycle(const Cocycle<T>& rho, const TransitionGraph& graph);

/// Truncation to the window of the translation-invariant function
/// g = Σ_τ τ(g_0 - E[g_0]), where `stencil` is g_0 on a finite set of lattice
/// sites. Translates that miss the window contribute nothing.
template <class T>
FnTable<T> invariant_function(const FnTable<T>& stencil, const TransitionGraph& graph,
                              const ProductMeasure<T>& mu);

template <class T>
struct CocycleCheck {
    Coord shift;
    SiteSet interior;
    bool holds = false;
};

template <class T>
struct CocycleReport {
    bool holds = true;
    std::vector<CocycleCheck<T>> checks;
};

/// Checks π^W(θ - σθ) = π^W ρ(σ) on the interior W for every shift in
/// `shifts` (the unit translations when empty). Throws WindowTooSmall.
template <class T>
CocycleReport<T> verify_cocycle_identity(const Cocycle<T>& rho, const TransitionGraph& graph,
                                         const ProductMeasure<T>& mu, int margin,
                                         std::vector<Coord> shifts = {});

/// A translation-invariant closed form given by its truncation to a lattice
/// window.
template <class T>
struct InvariantFormSpec {
    Form<T> form;
    int margin = 2;
};

template <class T>
struct Decomposition {
    Cocycle<T> cocycle;
    /// ω - ω_ρ.
    Form<T> exact_part;
    /// θ - θ_ρ, mean zero on each communicating class; ∂ of it is the exact part.
    FnTable<T> exact_potential;
    /// Potential of ω found by solve_potential.
    FnTable<T> theta;
    /// π^W(g - σg) = 0 for the exact potential g on every interior W.
    bool potential_invariant = false;
    std::vector<SiteSet> interiors;
};

/// Splits ω into ω_ρ + (exact invariant part). Throws NotClosed,
/// NotInvariant, ResidueNotConserved, WindowTooSmall.
template <class T>
Decomposition<T> decompose_invariant_form(const InvariantFormSpec<T>& spec,
                                          const StateMeasure<T>& nu);

}  // namespace colocal
