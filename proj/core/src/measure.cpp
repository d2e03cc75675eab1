#include <colocal/detail/parallel.hpp>
#include <colocal/measure.hpp>

#include <string>

namespace colocal {
namespace {

template <class T>
void check_probability(const std::vector<T>& weights, const char* what) {
    if (weights.empty()) throw Error(Errc::InvalidMeasure, std::string(what) + " has no weights");
    T total(0);
    for (const auto& w : weights) {
        if (!scalar_traits<T>::is_positive(w))
            throw Error(Errc::InvalidMeasure, std::string(what) + " must give every point positive weight");
        total += w;
    }
    if (!approx_equal(total, T(1)))
        throw Error(Errc::InvalidMeasure, std::string(what) + " weights sum to " + scalar_traits<T>::format(total));
}

void require_subset(const SiteSet& subset, const SiteSet& sites) {
    if (!subset.is_subset_of(sites)) throw Error(Errc::NotSubset, "target sites are not a subset of the source");
}

template <class T>
void check_same_space(const ConfigSpace& a, const ConfigSpace& b) {
    if (!(a == b)) throw Error(Errc::SiteSetMismatch, "function and measure live on different site sets");
}

}  // namespace

// ---------------------------------------------------------------------------
// StateMeasure
// ---------------------------------------------------------------------------

template <class T>
StateMeasure<T>::StateMeasure(std::vector<T> weights) : weights_(std::move(weights)) {
    check_probability(weights_, "state measure");
}

template <class T>
StateMeasure<T> StateMeasure<T>::uniform(std::size_t num_states) {
    if (num_states == 0) throw Error(Errc::InvalidMeasure, "uniform measure on an empty set");
    return StateMeasure(std::vector<T>(num_states, T(1) / T(static_cast<long>(num_states))));
}

template <class T>
StateMeasure<T> StateMeasure<T>::bernoulli(const T& p) {
    return StateMeasure(std::vector<T>{T(1) - p, p});
}

template <class T>
T StateMeasure<T>::expect(std::span<const T> values) const {
    if (values.size() != weights_.size()) throw Error(Errc::SiteSetMismatch, "value vector length mismatch");
    T total(0);
    for (std::size_t s = 0; s < values.size(); ++s) total += weights_[s] * values[s];
    return total;
}

// ---------------------------------------------------------------------------
// WindowMeasure / ProductMeasure
// ---------------------------------------------------------------------------

template <class T>
WindowMeasure<T>::WindowMeasure(ConfigSpace space, std::vector<T> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.size())
        throw Error(Errc::InvalidMeasure, "window measure needs one weight per configuration");
    check_probability(weights_, "window measure");
}

template <class T>
WindowMeasure<T> WindowMeasure<T>::from_masses(ConfigSpace space, std::vector<T> masses) {
    T total(0);
    for (const auto& m : masses) {
        if (!scalar_traits<T>::is_positive(m))
            throw Error(Errc::InvalidMeasure, "window measure must give every point positive weight");
        total += m;
    }
    for (auto& m : masses) m /= total;
    return WindowMeasure(std::move(space), std::move(masses));
}

template <class T>
T ProductMeasure<T>::weight(const ConfigSpace& space, ConfigIndex index) const {
    T w(1);
    for (std::size_t p = 0; p < space.sites().size(); ++p) {
        const auto& nu = factor(space.sites()[p]);
        if (nu.num_states() != space.num_states())
            throw Error(Errc::InvalidMeasure, "measure and state set differ in size");
        w *= nu(static_cast<State>(index % space.num_states()));
        index /= space.num_states();
    }
    return w;
}

template <class T>
WindowMeasure<T> ProductMeasure<T>::on(const ConfigSpace& space) const {
    // Built digit by digit: weights of the first k sites, then extended.
    std::vector<T> weights{T(1)};
    weights.reserve(space.size());
    for (std::size_t p = 0; p < space.sites().size(); ++p) {
        const auto& nu = factor(space.sites()[p]);
        if (nu.num_states() != space.num_states())
            throw Error(Errc::InvalidMeasure, "measure and state set differ in size");
        const std::size_t block = weights.size();
        std::vector<T> next(block * space.num_states());
        for (std::size_t s = 0; s < space.num_states(); ++s)
            for (std::size_t i = 0; i < block; ++i) next[s * block + i] = weights[i] * nu(static_cast<State>(s));
        weights = std::move(next);
    }
    return WindowMeasure<T>(space, std::move(weights));
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

template <class T>
WindowMeasure<T> pushforward(const WindowMeasure<T>& mu, const SiteSet& subset) {
    require_subset(subset, mu.sites());
    const ConfigSpace target(subset, mu.space().num_states(), mu.space().size());
    const Projection pr(mu.space(), target);
    std::vector<T> weights(target.size(), T(0));
    for (ConfigIndex i = 0; i < mu.space().size(); ++i) weights[pr(i)] += mu(i);
    return WindowMeasure<T>(target, std::move(weights));
}

template <class T>
std::optional<ProductMeasure<T>> as_product(const WindowMeasure<T>& mu) {
    std::map<SiteId, StateMeasure<T>> factors;
    for (const auto site : mu.sites())
        factors.emplace(site, StateMeasure<T>(pushforward(mu, SiteSet{site}).weights()));
    ProductMeasure<T> product(StateMeasure<T>::uniform(mu.space().num_states()), std::move(factors));
    for (ConfigIndex i = 0; i < mu.space().size(); ++i)
        if (!approx_equal(product.weight(mu.space(), i), mu(i))) return std::nullopt;
    return product;
}

template <class T>
T expectation(const FnTable<T>& f, const WindowMeasure<T>& mu) {
    check_same_space<T>(f.space(), mu.space());
    T total(0);
    for (ConfigIndex i = 0; i < f.size(); ++i) total += f[i] * mu(i);
    return total;
}

template <class T>
T expectation(const FnTable<T>& f, const ProductMeasure<T>& mu) {
    return expectation(f, mu.on(f.space()));
}

template <class T>
T inner(const FnTable<T>& f, const FnTable<T>& g, const WindowMeasure<T>& mu) {
    check_same_space<T>(f.space(), g.space());
    check_same_space<T>(f.space(), mu.space());
    T total(0);
    for (ConfigIndex i = 0; i < f.size(); ++i) total += f[i] * g[i] * mu(i);
    return total;
}

template <class T>
T inner(const FnTable<T>& f, const FnTable<T>& g, const ProductMeasure<T>& mu) {
    return inner(f, g, mu.on(f.space()));
}

template <class T>
FnTable<T> conditional_expectation(const FnTable<T>& f, const SiteSet& subset, const WindowMeasure<T>& mu) {
    check_same_space<T>(f.space(), mu.space());
    require_subset(subset, f.sites());
    const ConfigSpace target(subset, f.space().num_states(), f.space().size());
    const Projection pr(f.space(), target);
    const auto& kept = pr.kept_offsets();
    const auto& dropped = pr.dropped_offsets();
    FnTable<T> out(target);
    detail::parallel_for(target.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            T num(0);
            T den(0);
            for (const auto off : dropped) {
                const ConfigIndex i = kept[j] + off;
                num += f[i] * mu(i);
                den += mu(i);
            }
            out[j] = num / den;
        }
    }, 256);
    return out;
}

template <class T>
FnTable<T> conditional_expectation(const FnTable<T>& f, const SiteSet& subset, const ProductMeasure<T>& mu) {
    require_subset(subset, f.sites());
    const ConfigSpace target(subset, f.space().num_states(), f.space().size());
    const Projection pr(f.space(), target);
    // Weights of the integrated-out sites, in dropped-offset order.
    const SiteSet dropped_sites = f.sites().minus(subset);
    const ConfigSpace dropped_space(dropped_sites, f.space().num_states(), f.space().size());
    const auto dropped_weights = mu.on(dropped_space).weights();
    const auto& kept = pr.kept_offsets();
    const auto& dropped = pr.dropped_offsets();
    FnTable<T> out(target);
    detail::parallel_for(target.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            T sum(0);
            for (std::size_t k = 0; k < dropped.size(); ++k) sum += f[kept[j] + dropped[k]] * dropped_weights[k];
            out[j] = sum;
        }
    }, 256);
    return out;
}

template <class T>
OrdinaryReport<T> is_ordinary(const WindowMeasure<T>& mu, const SiteSet& subset, const Locale& locale,
                              const Interaction& interaction) {
    require_subset(subset, mu.sites());
    const auto marginal = pushforward(mu, subset);
    const TransitionGraph inner_graph(locale, interaction, subset, Caps{mu.space().size(), Caps{}.subset_cap});
    const TransitionGraph outer_graph(locale, interaction, mu.sites(), Caps{mu.space().size(), Caps{}.subset_cap});
    const Projection pr(mu.space(), marginal.space());
    OrdinaryReport<T> report;
    for (ConfigIndex outer = 0; outer < mu.space().size(); ++outer) {
        const ConfigIndex eta = pr(outer);
        for (std::uint32_t k = 0; k < inner_graph.edges().size(); ++k) {
            const Edge& e = inner_graph.edges()[k];
            const auto outer_k = *outer_graph.edge_index(e);
            const T lhs = marginal(inner_graph.target(eta, k)) * mu(outer);
            const T rhs = marginal(eta) * mu(outer_graph.target(outer, outer_k));
            ++report.checked;
            if (!approx_equal(lhs, rhs)) {
                report.ordinary = false;
                report.violations.push_back({outer, e, lhs, rhs});
            }
        }
    }
    return report;
}

#define COLOCAL_INSTANTIATE(T)                                                                              \
    template class StateMeasure<T>;                                                                         \
    template class WindowMeasure<T>;                                                                        \
    template class ProductMeasure<T>;                                                                       \
    template WindowMeasure<T> pushforward(const WindowMeasure<T>&, const SiteSet&);                         \
    template std::optional<ProductMeasure<T>> as_product(const WindowMeasure<T>&);                          \
    template T expectation(const FnTable<T>&, const WindowMeasure<T>&);                                     \
    template T expectation(const FnTable<T>&, const ProductMeasure<T>&);                                    \
    template T inner(const FnTable<T>&, const FnTable<T>&, const WindowMeasure<T>&);                        \
    template T inner(const FnTable<T>&, const FnTable<T>&, const ProductMeasure<T>&);                       \
    template FnTable<T> conditional_expectation(const FnTable<T>&, const SiteSet&, const WindowMeasure<T>&); \
    template FnTable<T> conditional_expectation(const FnTable<T>&, const SiteSet&, const ProductMeasure<T>&); \
    template OrdinaryReport<T> is_ordinary(const WindowMeasure<T>&, const SiteSet&, const Locale&,          \
                                           const Interaction&);

COLOCAL_INSTANTIATE(Rational)
COLOCAL_INSTANTIATE(double)

}  // namespace colocal
