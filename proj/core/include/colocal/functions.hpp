#pragma once

#include <colocal/fn_table.hpp>
#include <colocal/measure.hpp>
#include <colocal/state_space.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace colocal {

/// ι^Λ f: evaluates f on the base-state extension of each η ∈ S^Λ.
/// Throws NotSubset.
template <class T>
FnTable<T> iota_restrict(const FnTable<T>& f, const SiteSet& subset, const Interaction& interaction);

/// σ(f)(η) = f(σ^{-1}η), a table on σ(Λ). Throws ActionLeavesWindow.
template <class T>
FnTable<T> group_act(const GroupElement& sigma, const FnTable<T>& f);

/// Finite truncation {f^{Λ_1}, ..., f^{Λ_n}} of a co-local function over a
/// nested chain Λ_1 ⊂ ... ⊂ Λ_n.
template <class T>
struct CoLocalChain {
    std::vector<SiteSet> windows;
    std::vector<FnTable<T>> tables;
    ProductMeasure<T> measure;

    /// π^{Λ_i} f^{Λ_j} = f^{Λ_i} for every i < j.
    bool is_compatible() const;
};

/// f^{Λ_i} = π^{Λ_i} f. `windows` must be nested with f on the last one.
/// Throws NotSubset.
template <class T>
CoLocalChain<T> build_chain(const FnTable<T>& f, const std::vector<SiteSet>& windows,
                            const ProductMeasure<T>& mu);

/// Martingale (Hoeffding) expansion f = Σ_{A ⊂ Λ} f_A.
template <class T>
struct Expansion {
    SiteSet sites;
    /// Keyed by bitmask over positions of `sites`; entry for A is a table on A.
    std::map<std::uint64_t, FnTable<T>> components;

    const FnTable<T>& component(std::uint64_t mask) const { return components.at(mask); }
    /// Σ_A f_A as a table on Λ.
    FnTable<T> reconstruct(const ConfigSpace& space) const;
};

/// Unique components f_A with π^{Λ'} f_A ≡ 0 whenever A ⊄ Λ' and Σ f_A = f.
/// Factors may differ between sites. Throws TooManySubsets.
template <class T>
Expansion<T> expand_martingale(const FnTable<T>& f, const ProductMeasure<T>& mu,
                               const Caps& caps = {});

/// Window-measure variant: accepted only when μ factorizes over sites.
/// Throws NonProductMeasure.
template <class T>
Expansion<T> expand_martingale(const FnTable<T>& f, const WindowMeasure<T>& mu, const Caps& caps = {});

struct RadiusReport {
    std::int64_t radius = 0;
    /// Component attaining the radius, if any component but f_∅ is nonzero.
    std::optional<std::uint64_t> witness;
};

/// Minimal R with f_A = 0 whenever diam A > R.
template <class T>
RadiusReport uniform_radius(const Expansion<T>& expansion, const Locale& locale);

/// ν-regularized conserved quantity ξ: S → scalar.
template <class T>
struct ConservedQuantity {
    std::vector<T> xi;
};

/// Basis of {ξ : E_ν[ξ] = 0, ξ(s1')+ξ(s2') = ξ(s1)+ξ(s2) on every transition}.
///
/// Solutions are first normalized with ξ(base) = 0 and reduced to row echelon
/// form with each free variable set to 1 in turn; each basis vector is then
/// shifted by its ν-mean.
template <class T>
std::vector<ConservedQuantity<T>> conserved_quantities(const Interaction& interaction,
                                                       const StateMeasure<T>& nu);

/// ξ^Λ(η) = Σ_{x ∈ Λ} ξ(η_x).
template <class T>
FnTable<T> conserved_colocal(const ConservedQuantity<T>& xi, const ConfigSpace& space);

struct IqWitness {
    ConfigIndex first;
    ConfigIndex second;
};

struct IqLocaleReport {
    std::size_t configurations = 0;
    std::size_t components = 0;
    std::size_t level_sets = 0;
    bool holds = true;
    /// Two configurations with equal conserved totals but no connecting path.
    std::optional<IqWitness> witness;
};

struct IqReport {
    bool holds = true;
    std::size_t conserved_dimension = 0;
    std::vector<IqLocaleReport> locales;
};

/// Refutes irreducible quantification on each locale: every level set of the
/// conserved totals must be a single component of the transition graph.
/// Throws SpaceTooLarge.
template <class T>
IqReport check_iq(const Interaction& interaction, const StateMeasure<T>& nu,
                  const std::vector<Locale>& locales, const Caps& caps = {});

}  // namespace colocal
