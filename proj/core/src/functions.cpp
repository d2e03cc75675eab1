#include <colocal/functions.hpp>
#include <colocal/linalg.hpp>

#include <bit>
#include <cmath>
#include <map>

namespace colocal {
namespace {

template <class T>
struct LevelKey {
    using type = std::vector<T>;
    static type make(const std::vector<T>& v) { return v; }
};

// Float totals are bucketed on the tolerance grid.
template <>
struct LevelKey<double> {
    using type = std::vector<long long>;
    static type make(const std::vector<double>& v) {
        type key;
        key.reserve(v.size());
        for (const double x : v) key.push_back(std::llround(x / float_tolerance()));
        return key;
    }
};

}  // namespace

template <class T>
FnTable<T> iota_restrict(const FnTable<T>& f, const SiteSet& subset, const Interaction& interaction) {
    if (!subset.is_subset_of(f.sites())) throw Error(Errc::NotSubset, "restriction target is not a subset");
    const ConfigSpace target(subset, f.space().num_states(), f.size());
    const Projection pr(f.space(), target);
    ConfigIndex base_offset = 0;
    for (const auto p : pr.dropped()) base_offset += f.space().stride(p) * interaction.base();
    FnTable<T> out(target);
    for (ConfigIndex j = 0; j < target.size(); ++j) out[j] = f[pr.kept_offsets()[j] + base_offset];
    return out;
}

template <class T>
FnTable<T> group_act(const GroupElement& sigma, const FnTable<T>& f) {
    const SiteSet image = sigma.apply(f.sites());
    const ConfigSpace target(image, f.space().num_states(), f.size());
    // Position in the image of σ(x_p), for each position p of Λ.
    std::vector<std::size_t> image_pos(f.sites().size());
    for (std::size_t p = 0; p < f.sites().size(); ++p) image_pos[p] = *image.position(*sigma.apply(f.sites()[p]));
    FnTable<T> out(target);
    for (ConfigIndex j = 0; j < target.size(); ++j) {
        ConfigIndex source = 0;
        for (std::size_t p = 0; p < image_pos.size(); ++p)
            source += f.space().stride(p) * target.digit(j, image_pos[p]);
        out[j] = f[source];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Co-local chains
// ---------------------------------------------------------------------------

template <class T>
bool CoLocalChain<T>::is_compatible() const {
    for (std::size_t j = 0; j < tables.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (!conditional_expectation(tables[j], windows[i], measure).equals(tables[i])) return false;
    return true;
}

template <class T>
CoLocalChain<T> build_chain(const FnTable<T>& f, const std::vector<SiteSet>& windows, const ProductMeasure<T>& mu) {
    if (windows.empty()) throw Error(Errc::InvalidInput, "empty chain");
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (!windows[i - 1].is_subset_of(windows[i])) throw Error(Errc::NotSubset, "chain windows are not nested");
    if (!(windows.back() == f.sites())) throw Error(Errc::SiteSetMismatch, "function must live on the largest window");
    CoLocalChain<T> chain{windows, {}, mu};
    for (const auto& w : windows) chain.tables.push_back(conditional_expectation(f, w, mu));
    return chain;
}

// ---------------------------------------------------------------------------
// Martingale expansion
// ---------------------------------------------------------------------------

template <class T>
FnTable<T> Expansion<T>::reconstruct(const ConfigSpace& space) const {
    FnTable<T> total(space);
    for (const auto& [mask, component] : components) total += component.lift(space);
    return total;
}

template <class T>
Expansion<T> expand_martingale(const FnTable<T>& f, const ProductMeasure<T>& mu, const Caps& caps) {
    const SiteSet& sites = f.sites();
    const std::size_t n = sites.size();
    if (n > caps.subset_cap || n >= 63)
        throw Error(Errc::TooManySubsets, std::to_string(n) + " sites exceed the subset cap of " +
                                              std::to_string(caps.subset_cap));
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;

    // g[A] = π^A f, each obtained from a superset with one more site. Masks
    // are visited in decreasing order so A ∪ {x} is always ready.
    std::vector<std::optional<FnTable<T>>> g(full + 1);
    g[full] = f;
    for (std::uint64_t mask = full; mask-- > 0;) {
        const std::uint64_t missing = full & ~mask;
        const std::uint64_t parent = mask | (missing & (~missing + 1));
        g[mask] = conditional_expectation(*g[parent], sites.select(mask), mu);
    }

    // Möbius inversion over the subset lattice, one site at a time:
    // f_A = Σ_{B ⊂ A} (-1)^{|A∖B|} π^B f, which unrolls
    // f_A = π^A f - Σ_{B ⊊ A} f_B.
    for (std::size_t bit = 0; bit < n; ++bit) {
        const std::uint64_t b = std::uint64_t{1} << bit;
        for (std::uint64_t mask = 0; mask <= full; ++mask) {
            if (!(mask & b)) continue;
            *g[mask] -= g[mask ^ b]->lift(g[mask]->space());
        }
    }

    Expansion<T> out{sites, {}};
    for (std::uint64_t mask = 0; mask <= full; ++mask) out.components.emplace(mask, std::move(*g[mask]));
    return out;
}

template <class T>
Expansion<T> expand_martingale(const FnTable<T>& f, const WindowMeasure<T>& mu, const Caps& caps) {
    const auto product = as_product(mu);
    if (!product) throw Error(Errc::NonProductMeasure, "the expansion needs a product measure");
    return expand_martingale(f, *product, caps);
}

template <class T>
RadiusReport uniform_radius(const Expansion<T>& expansion, const Locale& locale) {
    RadiusReport report;
    for (const auto& [mask, component] : expansion.components) {
        if (mask == 0 || component.is_zero()) continue;
        const auto diam = site_diameter(expansion.sites.select(mask), locale);
        if (!report.witness || diam > report.radius) {
            report.radius = diam;
            report.witness = mask;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Conserved quantities
// ---------------------------------------------------------------------------

template <class T>
std::vector<ConservedQuantity<T>> conserved_quantities(const Interaction& interaction, const StateMeasure<T>& nu) {
    const std::size_t n = interaction.num_states();
    if (nu.num_states() != n) throw Error(Errc::InvalidMeasure, "measure and state set differ in size");

    std::vector<std::vector<T>> rows;
    for (const auto& [s1, s2] : interaction.changed_pairs()) {
        const auto [t1, t2] = interaction.apply(s1, s2);
        std::vector<T> row(n, T(0));
        row[t1] += T(1);
        row[t2] += T(1);
        row[s1] -= T(1);
        row[s2] -= T(1);
        bool nonzero = false;
        for (const auto& v : row) nonzero = nonzero || !is_zero(v);
        if (nonzero) rows.push_back(std::move(row));
    }
    // Constants always solve the system; pin ξ(base) = 0 and recentre later.
    std::vector<T> pin(n, T(0));
    pin[interaction.base()] = T(1);
    rows.push_back(std::move(pin));

    Matrix<T> system(rows.size(), n);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n; ++c) system(r, c) = rows[r][c];

    std::vector<ConservedQuantity<T>> basis;
    for (auto& v : nullspace(system)) {
        const T mean = nu.expect(v);
        for (auto& x : v) x -= mean;
        basis.push_back({std::move(v)});
    }
    return basis;
}

template <class T>
FnTable<T> conserved_colocal(const ConservedQuantity<T>& xi, const ConfigSpace& space) {
    if (xi.xi.size() != space.num_states()) throw Error(Errc::InvalidInput, "conserved quantity has wrong length");
    FnTable<T> out(space);
    for (ConfigIndex i = 0; i < space.size(); ++i) {
        T total(0);
        ConfigIndex rest = i;
        for (std::size_t p = 0; p < space.sites().size(); ++p) {
            total += xi.xi[rest % space.num_states()];
            rest /= space.num_states();
        }
        out[i] = total;
    }
    return out;
}

template <class T>
IqReport check_iq(const Interaction& interaction, const StateMeasure<T>& nu, const std::vector<Locale>& locales,
                  const Caps& caps) {
    const auto basis = conserved_quantities(interaction, nu);
    IqReport report;
    report.conserved_dimension = basis.size();
    for (const auto& locale : locales) {
        const TransitionGraph graph(locale, interaction, locale.sites(), caps);
        const auto labels = graph.component_labels();
        std::vector<FnTable<T>> totals;
        for (const auto& xi : basis) totals.push_back(conserved_colocal(xi, graph.space()));

        IqLocaleReport lr;
        lr.configurations = graph.space().size();
        lr.components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        // Level set key -> (first configuration, its component).
        std::map<typename LevelKey<T>::type, std::pair<ConfigIndex, std::uint32_t>> level_sets;
        std::vector<T> values(basis.size());
        for (ConfigIndex i = 0; i < graph.space().size(); ++i) {
            for (std::size_t b = 0; b < basis.size(); ++b) values[b] = totals[b][i];
            const auto [it, inserted] = level_sets.try_emplace(LevelKey<T>::make(values), i, labels[i]);
            if (!inserted && it->second.second != labels[i] && !lr.witness) {
                lr.holds = false;
                lr.witness = IqWitness{it->second.first, i};
            }
        }
        lr.level_sets = level_sets.size();
        report.holds = report.holds && lr.holds;
        report.locales.push_back(std::move(lr));
    }
    return report;
}

#define COLOCAL_INSTANTIATE(T)                                                                                \
    template FnTable<T> iota_restrict(const FnTable<T>&, const SiteSet&, const Interaction&);                  \
    template FnTable<T> group_act(const GroupElement&, const FnTable<T>&);                                     \
    template struct CoLocalChain<T>;                                                                           \
    template CoLocalChain<T> build_chain(const FnTable<T>&, const std::vector<SiteSet>&, const ProductMeasure<T>&); \
    template struct Expansion<T>;                                                                              \
    template Expansion<T> expand_martingale(const FnTable<T>&, const ProductMeasure<T>&, const Caps&);         \
    template Expansion<T> expand_martingale(const FnTable<T>&, const WindowMeasure<T>&, const Caps&);         \
    template RadiusReport uniform_radius(const Expansion<T>&, const Locale&);                                  \
    template std::vector<ConservedQuantity<T>> conserved_quantities(const Interaction&, const StateMeasure<T>&); \
    template FnTable<T> conserved_colocal(const ConservedQuantity<T>&, const ConfigSpace&);                    \
    template IqReport check_iq(const Interaction&, const StateMeasure<T>&, const std::vector<Locale>&, const Caps&);

COLOCAL_INSTANTIATE(Rational)
COLOCAL_INSTANTIATE(double)

}  // namespace colocal
