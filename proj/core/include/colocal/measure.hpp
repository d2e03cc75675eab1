#pragma once

#include <colocal/fn_table.hpp>
#include <colocal/state_space.hpp>

#include <map>
#include <optional>
#include <vector>

namespace colocal {

/// Probability measure ν on S with full support.
template <class T>
class StateMeasure {
public:
    /// Throws InvalidMeasure unless every weight is > 0 and they sum to 1.
    explicit StateMeasure(std::vector<T> weights);
    /// Uniform measure on n states.
    static StateMeasure uniform(std::size_t num_states);
    /// Two-state measure with ν(1) = p.
    static StateMeasure bernoulli(const T& p);

    std::size_t num_states() const noexcept { return weights_.size(); }
    const T& operator()(State s) const { return weights_[s]; }
    const std::vector<T>& weights() const noexcept { return weights_; }

    /// E_ν[v] for v indexed by state.
    T expect(std::span<const T> values) const;

private:
    std::vector<T> weights_;
};

/// Positive probability weights on S^Λ for one finite window.
template <class T>
class WindowMeasure {
public:
    /// Throws InvalidMeasure unless every weight is > 0 and they sum to 1.
    WindowMeasure(ConfigSpace space, std::vector<T> weights);
    /// Normalizes arbitrary positive masses.
    static WindowMeasure from_masses(ConfigSpace space, std::vector<T> masses);

    const ConfigSpace& space() const noexcept { return space_; }
    const SiteSet& sites() const noexcept { return space_.sites(); }
    const T& operator()(ConfigIndex i) const { return weights_[i]; }
    const std::vector<T>& weights() const noexcept { return weights_; }

private:
    ConfigSpace space_;
    std::vector<T> weights_;
};

/// ν^{⊗X}, or a site-dependent product ⊗ ν_x. Kept symbolic; windows are
/// materialized on request.
template <class T>
class ProductMeasure {
public:
    explicit ProductMeasure(StateMeasure<T> nu) : homogeneous_(std::move(nu)) {}
    /// ν_x per site; sites missing from the map use `fallback`.
    ProductMeasure(StateMeasure<T> fallback, std::map<SiteId, StateMeasure<T>> per_site)
        : homogeneous_(std::move(fallback)), per_site_(std::move(per_site)) {}

    bool is_homogeneous() const noexcept { return per_site_.empty(); }
    const StateMeasure<T>& factor(SiteId site) const {
        const auto it = per_site_.find(site);
        return it == per_site_.end() ? homogeneous_ : it->second;
    }
    const StateMeasure<T>& base() const noexcept { return homogeneous_; }

    /// μ(η) for a configuration index of `space`.
    T weight(const ConfigSpace& space, ConfigIndex index) const;
    WindowMeasure<T> on(const ConfigSpace& space) const;

private:
    StateMeasure<T> homogeneous_;
    std::map<SiteId, StateMeasure<T>> per_site_;
};

/// The product of the single-site marginals of μ, if μ equals it.
template <class T>
std::optional<ProductMeasure<T>> as_product(const WindowMeasure<T>& mu);

/// Marginal of μ on Λ ⊂ Λ'. Throws NotSubset.
template <class T>
WindowMeasure<T> pushforward(const WindowMeasure<T>& mu, const SiteSet& subset);

/// E_μ[f]. Throws SiteSetMismatch.
template <class T>
T expectation(const FnTable<T>& f, const WindowMeasure<T>& mu);
template <class T>
T expectation(const FnTable<T>& f, const ProductMeasure<T>& mu);

/// ⟨f, g⟩_μ = E_μ[fg]. Throws SiteSetMismatch.
template <class T>
T inner(const FnTable<T>& f, const FnTable<T>& g, const WindowMeasure<T>& mu);
template <class T>
T inner(const FnTable<T>& f, const FnTable<T>& g, const ProductMeasure<T>& mu);

/// π^Λ f = E_μ[f | F_Λ] for f on Λ' ⊃ Λ, with μ a window measure on Λ'.
/// Throws NotSubset or SiteSetMismatch.
template <class T>
FnTable<T> conditional_expectation(const FnTable<T>& f, const SiteSet& subset,
                                   const WindowMeasure<T>& mu);

/// π^Λ f under a product measure: the dropped sites are integrated out
/// factor by factor. Throws NotSubset.
template <class T>
FnTable<T> conditional_expectation(const FnTable<T>& f, const SiteSet& subset,
                                   const ProductMeasure<T>& mu);

template <class T>
struct OrdinaryViolation {
    ConfigIndex outer;  // η' ∈ S^Λ'
    Edge edge;          // e ∈ E_Λ
    T lhs;              // μ(η^e) μ(η')
    T rhs;              // μ(η) μ(η'^e)
};

template <class T>
struct OrdinaryReport {
    bool ordinary = true;
    std::size_t checked = 0;
    std::vector<OrdinaryViolation<T>> violations;
};

/// Checks μ(η^e)μ(η') = μ(η)μ(η'^e) for every η' ∈ S^Λ' and e ∈ E_Λ, where
/// η = pr_Λ(η') and the Λ-marginal is the pushforward of `mu`.
template <class T>
OrdinaryReport<T> is_ordinary(const WindowMeasure<T>& mu, const SiteSet& subset,
                              const Locale& locale, const Interaction& interaction);

}  // namespace colocal
