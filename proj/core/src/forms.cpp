#include <colocal/detail/parallel.hpp>
#include <colocal/forms.hpp>
#include <colocal/functions.hpp>

#include <deque>
#include <set>
#include <string>

namespace colocal {
namespace {

std::string edge_str(const Edge& e) {
    return "(" + std::to_string(e.origin) + "," + std::to_string(e.target) + ")";
}

// BFS spanning forest, rooted at the smallest index of each component.
struct Forest {
    static constexpr ConfigIndex kNone = ~ConfigIndex{0};
    std::vector<ConfigIndex> parent;
    std::vector<std::uint32_t> parent_edge;  // parent^{edge} = node
    std::vector<ConfigIndex> order;          // BFS visiting order

    explicit Forest(const TransitionGraph& graph)
        : parent(graph.space().size(), kNone), parent_edge(graph.space().size(), 0) {
        const auto n = graph.space().size();
        std::vector<bool> seen(n, false);
        order.reserve(n);
        std::deque<ConfigIndex> queue;
        for (ConfigIndex root = 0; root < n; ++root) {
            if (seen[root]) continue;
            seen[root] = true;
            queue.push_back(root);
            while (!queue.empty()) {
                const ConfigIndex cur = queue.front();
                queue.pop_front();
                order.push_back(cur);
                for (std::uint32_t k = 0; k < graph.edges().size(); ++k) {
                    const ConfigIndex next = graph.target(cur, k);
                    if (next == cur || seen[next]) continue;
                    seen[next] = true;
                    parent[next] = cur;
                    parent_edge[next] = k;
                    queue.push_back(next);
                }
            }
        }
    }

    bool is_tree_pair(ConfigIndex a, ConfigIndex b) const { return parent[a] == b || parent[b] == a; }

    // Edges from the root of `node`'s tree down to `node`.
    std::vector<std::uint32_t> path_from_root(ConfigIndex node) const {
        std::vector<std::uint32_t> edges;
        while (parent[node] != kNone) {
            edges.push_back(parent_edge[node]);
            node = parent[node];
        }
        return {edges.rbegin(), edges.rend()};
    }

    ConfigIndex root_of(ConfigIndex node) const {
        while (parent[node] != kNone) node = parent[node];
        return node;
    }

    // root -> from, then `edge`, then back up to the root.
    Path cycle_through(const TransitionGraph& graph, ConfigIndex from, std::uint32_t edge) const {
        Path path{root_of(from), {}};
        for (const auto k : path_from_root(from)) path.edges.push_back(graph.edges()[k]);
        path.edges.push_back(graph.edges()[edge]);
        ConfigIndex node = graph.target(from, edge);
        while (parent[node] != kNone) {
            path.edges.push_back(graph.edges()[graph.reverse_edge(parent_edge[node])]);
            node = parent[node];
        }
        return path;
    }
};

}  // namespace

// ---------------------------------------------------------------------------
// Form
// ---------------------------------------------------------------------------

template <class T>
Form<T>::Form(TransitionGraph graph) : graph_(std::move(graph)) {
    index_edges();
    stored_.assign(stored_edges_.size(), FnTable<T>(graph_.space()));
}

template <class T>
Form<T>::Form(TransitionGraph graph, std::vector<FnTable<T>> stored) : graph_(std::move(graph)), stored_(std::move(stored)) {
    index_edges();
    if (stored_.size() != stored_edges_.size())
        throw Error(Errc::MalformedForm, "expected " + std::to_string(stored_edges_.size()) + " edge tables, got " +
                                             std::to_string(stored_.size()));
    for (const auto& t : stored_)
        if (!(t.space() == graph_.space())) throw Error(Errc::MalformedForm, "edge table on the wrong site set");
    validate();
}

template <class T>
Form<T> Form<T>::from_directed(TransitionGraph graph, const std::map<Edge, FnTable<T>>& tables) {
    Form out(std::move(graph));
    const auto& g = out.graph_;
    for (const auto& e : g.edges())
        if (!tables.count(e)) throw Error(Errc::MalformedForm, "missing table for edge " + edge_str(e));
    for (const auto& [e, t] : tables) {
        if (!g.edge_index(e)) throw Error(Errc::MalformedForm, "edge " + edge_str(e) + " is not in E_Λ");
        if (!(t.space() == g.space())) throw Error(Errc::MalformedForm, "edge table on the wrong site set");
    }
    for (std::size_t slot = 0; slot < out.stored_edges_.size(); ++slot)
        out.stored_[slot] = tables.at(g.edges()[out.stored_edges_[slot]]);
    // The unstored orientation must equal the one derived by alternation.
    for (std::uint32_t k = 0; k < g.edges().size(); ++k) {
        const auto& t = tables.at(g.edges()[k]);
        for (ConfigIndex i = 0; i < g.space().size(); ++i)
            if (!approx_equal(t[i], out.value(k, i)))
                throw Error(Errc::MalformedForm, "edge " + edge_str(g.edges()[k]) +
                                                     " violates the alternating property at configuration " +
                                                     std::to_string(i));
    }
    out.validate();
    return out;
}

template <class T>
void Form<T>::index_edges() {
    const auto& edges = graph_.edges();
    slot_of_edge_.assign(edges.size(), 0);
    stored_edges_.clear();
    for (std::uint32_t k = 0; k < edges.size(); ++k)
        if (edges[k].origin < edges[k].target) {
            slot_of_edge_[k] = static_cast<std::uint32_t>(stored_edges_.size());
            stored_edges_.push_back(k);
        }
    for (std::uint32_t k = 0; k < edges.size(); ++k)
        if (edges[k].origin > edges[k].target) slot_of_edge_[k] = slot_of_edge_[graph_.reverse_edge(k)];
}

template <class T>
void Form<T>::validate() const {
    const auto& g = graph_;
    for (std::size_t slot = 0; slot < stored_edges_.size(); ++slot) {
        const auto k = stored_edges_[slot];
        for (ConfigIndex i = 0; i < g.space().size(); ++i)
            if (g.target(i, k) == i && !colocal::is_zero(stored_[slot][i]))
                throw Error(Errc::MalformedForm, "nonzero value on the fixed point " + std::to_string(i) +
                                                     " of edge " + edge_str(g.edges()[k]));
    }
    // ω_e(η) = ω_e'(η) whenever η^e = η^e'.
    std::vector<std::pair<ConfigIndex, T>> seen;
    for (ConfigIndex i = 0; i < g.space().size(); ++i) {
        seen.clear();
        for (std::uint32_t k = 0; k < g.edges().size(); ++k) {
            const auto j = g.target(i, k);
            if (j == i) continue;
            const T v = value(k, i);
            bool found = false;
            for (const auto& [jj, vv] : seen)
                if (jj == j) {
                    found = true;
                    if (!approx_equal(v, vv))
                        throw Error(Errc::MalformedForm, "edges producing the same transition from configuration " +
                                                             std::to_string(i) + " disagree");
                }
            if (!found) seen.emplace_back(j, v);
        }
    }
}

template <class T>
T Form<T>::value(std::uint32_t edge, ConfigIndex eta) const {
    const ConfigIndex next = graph_.target(eta, edge);
    if (next == eta) return T(0);
    const auto& table = stored_[slot_of_edge_[edge]];
    if (graph_.edges()[edge].origin < graph_.edges()[edge].target) return table[eta];
    return -table[next];
}

template <class T>
T Form<T>::value(const Edge& edge, ConfigIndex eta) const {
    const auto k = graph_.edge_index(edge);
    if (!k) throw Error(Errc::EdgeOutsideSiteSet, "edge " + edge_str(edge) + " is not in E_Λ");
    return value(*k, eta);
}

template <class T>
FnTable<T> Form<T>::table(std::uint32_t edge) const {
    FnTable<T> out(graph_.space());
    for (ConfigIndex i = 0; i < out.size(); ++i) out[i] = value(edge, i);
    return out;
}

template <class T>
bool Form<T>::is_zero() const {
    for (const auto& t : stored_)
        if (!t.is_zero()) return false;
    return true;
}

template <class T>
bool Form<T>::equals(const Form& other) const {
    if (!(graph_.space() == other.graph_.space()) || graph_.edges() != other.graph_.edges()) return false;
    for (std::size_t s = 0; s < stored_.size(); ++s)
        if (!stored_[s].equals(other.stored_[s])) return false;
    return true;
}

template <class T>
void Form<T>::check_same(const Form& rhs) const {
    if (!(graph_.space() == rhs.graph_.space()) || graph_.edges() != rhs.graph_.edges())
        throw Error(Errc::SiteSetMismatch, "forms live on different windows");
}

template <class T>
Form<T>& Form<T>::operator+=(const Form& rhs) {
    check_same(rhs);
    for (std::size_t s = 0; s < stored_.size(); ++s) stored_[s] += rhs.stored_[s];
    return *this;
}

template <class T>
Form<T>& Form<T>::operator-=(const Form& rhs) {
    check_same(rhs);
    for (std::size_t s = 0; s < stored_.size(); ++s) stored_[s] -= rhs.stored_[s];
    return *this;
}

template <class T>
Form<T>& Form<T>::operator*=(const T& c) {
    for (auto& t : stored_) t *= c;
    return *this;
}

// ---------------------------------------------------------------------------
// Differential and integration
// ---------------------------------------------------------------------------

template <class T>
Form<T> differential(const FnTable<T>& f, const TransitionGraph& graph) {
    if (!(f.space() == graph.space())) throw Error(Errc::SiteSetMismatch, "function and window differ");
    Form<T> zero(graph);
    std::vector<FnTable<T>> stored;
    for (const auto k : zero.stored_edges()) {
        FnTable<T> t(graph.space());
        detail::parallel_for(t.size(), [&](std::size_t begin, std::size_t end) {
            for (ConfigIndex i = begin; i < end; ++i) t[i] = f[graph.target(i, k)] - f[i];
        });
        stored.push_back(std::move(t));
    }
    return Form<T>(graph, std::move(stored));
}

ConfigIndex path_end(const TransitionGraph& graph, const Path& path) {
    if (path.start >= graph.space().size()) throw Error(Errc::InvalidPath, "start configuration out of range");
    ConfigIndex cur = path.start;
    for (std::size_t s = 0; s < path.edges.size(); ++s) {
        const auto k = graph.edge_index(path.edges[s]);
        if (!k) throw Error(Errc::InvalidPath, "step " + std::to_string(s) + " uses an edge outside E_Λ");
        const auto next = graph.target(cur, *k);
        if (next == cur) throw Error(Errc::InvalidPath, "step " + std::to_string(s) + " is not a transition");
        cur = next;
    }
    return cur;
}

template <class T>
T path_integral(const Form<T>& form, const Path& path) {
    const auto& graph = form.graph();
    path_end(graph, path);
    T total(0);
    ConfigIndex cur = path.start;
    for (const auto& e : path.edges) {
        const auto k = *graph.edge_index(e);
        total += form.value(k, cur);
        cur = graph.target(cur, k);
    }
    return total;
}

template <class T>
PotentialResult<T> solve_potential(const Form<T>& form, const WindowMeasure<T>& mu) {
    const auto& graph = form.graph();
    if (!(mu.space() == graph.space())) throw Error(Errc::SiteSetMismatch, "measure and form differ in window");
    const Forest forest(graph);
    FnTable<T> f(graph.space());
    for (const auto node : forest.order)
        if (forest.parent[node] != Forest::kNone)
            f[node] = f[forest.parent[node]] + form.value(forest.parent_edge[node], forest.parent[node]);

    PotentialResult<T> result;
    for (ConfigIndex i = 0; i < graph.space().size(); ++i) {
        for (std::uint32_t k = 0; k < graph.edges().size(); ++k) {
            const auto j = graph.target(i, k);
            if (j == i) continue;
            if (!approx_equal(T(f[j] - f[i]), form.value(k, i))) {
                result.witness = forest.cycle_through(graph, i, k);
                result.witness_integral = path_integral(form, *result.witness);
                return result;
            }
        }
    }
    f += T(-expectation(f, mu));
    result.closed = true;
    result.potential = std::move(f);
    return result;
}

template <class T>
FnTable<T> potential_of(const Form<T>& form, const WindowMeasure<T>& mu) {
    auto result = solve_potential(form, mu);
    if (!result.closed)
        throw Error(Errc::NotClosed, "form integrates to " + scalar_traits<T>::format(*result.witness_integral) +
                                         " around a closed path of length " +
                                         std::to_string(result.witness->edges.size()));
    return std::move(*result.potential);
}

std::vector<Path> cycle_basis(const TransitionGraph& graph) {
    const Forest forest(graph);
    std::set<std::pair<ConfigIndex, ConfigIndex>> seen;
    std::vector<Path> cycles;
    for (ConfigIndex i = 0; i < graph.space().size(); ++i) {
        for (std::uint32_t k = 0; k < graph.edges().size(); ++k) {
            const auto j = graph.target(i, k);
            if (j == i || forest.is_tree_pair(i, j)) continue;
            if (!seen.emplace(std::min(i, j), std::max(i, j)).second) continue;
            cycles.push_back(forest.cycle_through(graph, i, k));
        }
    }
    return cycles;
}

template <class T>
bool is_closed(const Form<T>& form) {
    for (const auto& cycle : cycle_basis(form.graph()))
        if (!is_zero(path_integral(form, cycle))) return false;
    return true;
}

template <class T>
KernelBasis<T> kernel_basis(const TransitionGraph& graph, const WindowMeasure<T>& mu) {
    if (!(mu.space() == graph.space())) throw Error(Errc::SiteSetMismatch, "measure and window differ");
    KernelBasis<T> out;
    out.labels = graph.component_labels();
    const std::size_t components = out.labels.empty() ? 0 : *std::max_element(out.labels.begin(), out.labels.end()) + 1;
    out.indicators.assign(components, FnTable<T>(graph.space()));
    std::vector<T> mass(components, T(0));
    for (ConfigIndex i = 0; i < graph.space().size(); ++i) {
        out.indicators[out.labels[i]][i] = T(1);
        mass[out.labels[i]] += mu(i);
    }
    for (std::size_t c = 1; c < components; ++c) {
        FnTable<T> v = out.indicators[c];
        v += T(-mass[c]);
        out.mean_zero.push_back(std::move(v));
    }
    out.dim_c0 = graph.space().size() - 1;
    out.dim_kernel = components;
    out.dim_kernel_c0 = components - 1;
    out.dim_z1 = out.dim_c0 - out.dim_kernel_c0;
    return out;
}

// ---------------------------------------------------------------------------
// Projection and group action
// ---------------------------------------------------------------------------

namespace {

template <class T, class Measure>
std::map<Edge, FnTable<T>> project_tables(const Form<T>& form, const SiteSet& subset, const Measure& mu) {
    const auto& g = form.graph();
    if (!subset.is_subset_of(g.sites())) throw Error(Errc::NotSubset, "projection target is not a subset");
    const auto edges = g.locale().edges_within(subset);
    std::map<Edge, FnTable<T>> out;
    for (const auto& e : edges) out.emplace(e, conditional_expectation(form.table(*g.edge_index(e)), subset, mu));
    return out;
}

}  // namespace

template <class T>
std::map<Edge, FnTable<T>> project_edge_tables(const Form<T>& form, const SiteSet& subset, const WindowMeasure<T>& mu) {
    return project_tables(form, subset, mu);
}

template <class T>
Form<T> project_form(const Form<T>& form, const SiteSet& subset, const WindowMeasure<T>& mu) {
    const auto& g = form.graph();
    if (!subset.is_subset_of(g.sites())) throw Error(Errc::NotSubset, "projection target is not a subset");
    const auto report = is_ordinary(mu, subset, g.locale(), g.interaction());
    if (!report.ordinary)
        throw Error(Errc::NotOrdinary, std::to_string(report.violations.size()) + " of " +
                                           std::to_string(report.checked) + " ordinarity identities fail");
    TransitionGraph target(g.locale(), g.interaction(), subset, g.caps());
    return Form<T>::from_directed(std::move(target), project_tables(form, subset, mu));
}

template <class T>
Form<T> project_form(const Form<T>& form, const SiteSet& subset, const ProductMeasure<T>& mu) {
    const auto& g = form.graph();
    auto tables = project_tables(form, subset, mu);
    TransitionGraph target(g.locale(), g.interaction(), subset, g.caps());
    return Form<T>::from_directed(std::move(target), tables);
}

template <class T>
Form<T> group_act(const GroupElement& sigma, const Form<T>& form) {
    const auto& g = form.graph();
    const SiteSet image = sigma.apply(g.sites());
    TransitionGraph target(g.locale(), g.interaction(), image, g.caps());
    const GroupElement inverse = sigma.inverse();
    std::map<Edge, FnTable<T>> tables;
    for (const auto& e : target.edges()) {
        const Edge source = inverse.apply(e);
        const auto k = g.edge_index(source);
        if (!k) throw Error(Errc::ActionLeavesWindow, "edge " + edge_str(e) + " has no preimage in E_Λ");
        tables.emplace(e, group_act(sigma, form.table(*k)));
    }
    return Form<T>::from_directed(std::move(target), tables);
}

#define COLOCAL_INSTANTIATE(T)                                                                                   \
    template class Form<T>;                                                                                       \
    template Form<T> differential(const FnTable<T>&, const TransitionGraph&);                                     \
    template T path_integral(const Form<T>&, const Path&);                                                        \
    template PotentialResult<T> solve_potential(const Form<T>&, const WindowMeasure<T>&);                         \
    template FnTable<T> potential_of(const Form<T>&, const WindowMeasure<T>&);                                    \
    template bool is_closed(const Form<T>&);                                                                      \
    template KernelBasis<T> kernel_basis(const TransitionGraph&, const WindowMeasure<T>&);                        \
    template std::map<Edge, FnTable<T>> project_edge_tables(const Form<T>&, const SiteSet&, const WindowMeasure<T>&); \
    template Form<T> project_form(const Form<T>&, const SiteSet&, const WindowMeasure<T>&);                       \
    template Form<T> project_form(const Form<T>&, const SiteSet&, const ProductMeasure<T>&);                      \
    template Form<T> group_act(const GroupElement&, const Form<T>&);

COLOCAL_INSTANTIATE(Rational)
COLOCAL_INSTANTIATE(double)

}  // namespace colocal
