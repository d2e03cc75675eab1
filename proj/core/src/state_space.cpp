#include <colocal/detail/union_find.hpp>
#include <colocal/state_space.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <string>

namespace colocal {
namespace {

std::string site_str(SiteId s) { return std::to_string(s); }

std::string edge_str(const Edge& e) { return "(" + site_str(e.origin) + "," + site_str(e.target) + ")"; }

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxLatticeDim)
        throw Error(Errc::InvalidInput, "lattice dimension must be in 1.." + std::to_string(kMaxLatticeDim));
}

// Nearest-neighbour edges among a set of lattice points.
std::vector<Edge> neighbour_edges(const std::vector<Coord>& points, int dim) {
    std::set<SiteId> ids;
    for (const auto& p : points) ids.insert(encode_coord(p));
    std::vector<Edge> edges;
    for (const auto& p : points) {
        const SiteId from = encode_coord(p);
        for (int i = 0; i < dim; ++i) {
            for (int step : {-1, 1}) {
                Coord q = p;
                q[i] += step;
                if (std::abs(q[i]) >= kCoordLimit) continue;
                const SiteId to = encode_coord(q);
                if (ids.count(to)) edges.push_back({from, to});
            }
        }
    }
    return edges;
}

std::vector<Coord> box_points(int dim, std::int64_t radius) {
    std::vector<Coord> points;
    Coord p(dim, -radius);
    while (true) {
        points.push_back(p);
        int i = dim - 1;
        while (i >= 0 && p[i] == radius) p[i--] = -radius;
        if (i < 0) break;
        ++p[i];
    }
    return points;
}

}  // namespace

// ---------------------------------------------------------------------------
// Coordinates
// ---------------------------------------------------------------------------

SiteId encode_coord(std::span<const std::int64_t> coord) {
    if (coord.empty() || coord.size() > static_cast<std::size_t>(kMaxLatticeDim))
        throw Error(Errc::InvalidInput, "coordinate dimension out of range");
    SiteId id = 0;
    for (const auto x : coord) {
        if (x <= -kCoordLimit || x >= kCoordLimit)
            throw Error(Errc::InvalidInput, "lattice coordinate " + std::to_string(x) + " out of range");
        id = id * kCoordRadix + x;
    }
    return id;
}

Coord decode_coord(SiteId id, int dim) {
    check_dim(dim);
    Coord coord(dim);
    for (int i = dim - 1; i >= 0; --i) {
        std::int64_t digit = id % kCoordRadix;
        if (digit >= kCoordLimit) digit -= kCoordRadix;
        if (digit < -kCoordLimit) digit += kCoordRadix;
        coord[i] = digit;
        id = (id - digit) / kCoordRadix;
    }
    return coord;
}

// ---------------------------------------------------------------------------
// SiteSet
// ---------------------------------------------------------------------------

SiteSet::SiteSet() : sites_(std::make_shared<const std::vector<SiteId>>()) {}

SiteSet::SiteSet(std::vector<SiteId> sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    sites_ = std::make_shared<const std::vector<SiteId>>(std::move(sites));
}

bool SiteSet::contains(SiteId site) const { return std::binary_search(begin(), end(), site); }

std::optional<std::size_t> SiteSet::position(SiteId site) const {
    const auto it = std::lower_bound(begin(), end(), site);
    if (it == end() || *it != site) return std::nullopt;
    return static_cast<std::size_t>(it - begin());
}

bool SiteSet::is_subset_of(const SiteSet& other) const {
    return std::includes(other.begin(), other.end(), begin(), end());
}

SiteSet SiteSet::intersect(const SiteSet& other) const {
    std::vector<SiteId> out;
    std::set_intersection(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
    return SiteSet(std::move(out));
}

SiteSet SiteSet::unite(const SiteSet& other) const {
    std::vector<SiteId> out;
    std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
    return SiteSet(std::move(out));
}

SiteSet SiteSet::minus(const SiteSet& other) const {
    std::vector<SiteId> out;
    std::set_difference(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
    return SiteSet(std::move(out));
}

SiteSet SiteSet::select(std::uint64_t mask) const {
    std::vector<SiteId> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (mask >> i & 1U) out.push_back((*sites_)[i]);
    return SiteSet(std::move(out));
}

std::uint64_t SiteSet::mask_of(const SiteSet& subset) const {
    std::uint64_t mask = 0;
    for (const auto s : subset) {
        const auto p = position(s);
        if (!p) throw Error(Errc::NotSubset, "site " + site_str(s) + " not in set");
        mask |= std::uint64_t{1} << *p;
    }
    return mask;
}

// ---------------------------------------------------------------------------
// Locale
// ---------------------------------------------------------------------------

Locale Locale::build(std::vector<SiteId> sites, std::vector<Edge> edges, std::optional<LatticeInfo> lattice) {
    auto data = std::make_shared<Data>();
    data->sites = SiteSet(std::move(sites));
    data->lattice = std::move(lattice);
    if (data->sites.empty()) throw Error(Errc::EmptySet, "a locale needs at least one site");

    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.origin == e.target) throw Error(Errc::NotSimple, "self-loop at " + site_str(e.origin));
        if (i > 0 && edges[i - 1] == e) throw Error(Errc::NotSimple, "duplicate edge " + edge_str(e));
        if (!data->sites.contains(e.origin) || !data->sites.contains(e.target))
            throw Error(Errc::InvalidInput, "edge " + edge_str(e) + " uses an unknown site");
    }
    for (const auto& e : edges)
        if (!std::binary_search(edges.begin(), edges.end(), e.reversed()))
            throw Error(Errc::NotSymmetric, "edge " + edge_str(e) + " has no reverse");

    for (const auto s : data->sites) data->adjacency[s];
    for (const auto& e : edges) data->adjacency[e.origin].push_back(e.target);
    data->edges = std::move(edges);

    // Connectivity by BFS from the first site.
    std::set<SiteId> seen{data->sites[0]};
    std::deque<SiteId> queue{data->sites[0]};
    while (!queue.empty()) {
        const SiteId s = queue.front();
        queue.pop_front();
        for (const auto t : data->adjacency[s])
            if (seen.insert(t).second) queue.push_back(t);
    }
    if (seen.size() != data->sites.size()) throw Error(Errc::NotConnected, "locale graph is not connected");

    return Locale(std::move(data));
}

std::span<const SiteId> Locale::neighbors(SiteId site) const {
    const auto it = data_->adjacency.find(site);
    if (it == data_->adjacency.end()) return {};
    return it->second;
}

bool Locale::has_edge(const Edge& e) const {
    return std::binary_search(data_->edges.begin(), data_->edges.end(), e);
}

std::vector<Edge> Locale::edges_within(const SiteSet& sites) const {
    std::vector<Edge> out;
    for (const auto& e : data_->edges)
        if (sites.contains(e.origin) && sites.contains(e.target)) out.push_back(e);
    return out;
}

std::int64_t Locale::distance(SiteId from, SiteId to) const {
    if (!sites().contains(from) || !sites().contains(to))
        throw Error(Errc::NotSubset, "distance between sites outside the locale");
    if (from == to) return 0;
    std::map<SiteId, std::int64_t> dist{{from, 0}};
    std::deque<SiteId> queue{from};
    while (!queue.empty()) {
        const SiteId s = queue.front();
        queue.pop_front();
        for (const auto t : neighbors(s)) {
            if (dist.count(t)) continue;
            dist[t] = dist[s] + 1;
            if (t == to) return dist[t];
            queue.push_back(t);
        }
    }
    return std::numeric_limits<std::int64_t>::max();
}

Locale lattice_window(int dim, std::int64_t radius) {
    check_dim(dim);
    if (radius < 0) throw Error(Errc::InvalidInput, "radius must be >= 0");
    const auto points = box_points(dim, radius);
    std::vector<SiteId> sites;
    for (const auto& p : points) sites.push_back(encode_coord(p));
    LatticeInfo info{LatticeInfo::Shape::Box, dim, radius, {}};
    return Locale::build(std::move(sites), neighbour_edges(points, dim), info);
}

Locale lattice_cross(int dim, std::int64_t radius) {
    check_dim(dim);
    if (radius < 0) throw Error(Errc::InvalidInput, "radius must be >= 0");
    std::vector<Coord> points;
    for (const auto& p : box_points(dim, radius)) {
        const auto nonzero = std::count_if(p.begin(), p.end(), [](auto x) { return x != 0; });
        if (nonzero <= 1) points.push_back(p);
    }
    std::vector<SiteId> sites;
    for (const auto& p : points) sites.push_back(encode_coord(p));
    LatticeInfo info{LatticeInfo::Shape::Cross, dim, radius, {}};
    return Locale::build(std::move(sites), neighbour_edges(points, dim), info);
}

Locale lattice_torus(std::vector<std::int64_t> sizes) {
    const int dim = static_cast<int>(sizes.size());
    check_dim(dim);
    for (const auto n : sizes)
        if (n < 3)
            throw Error(Errc::SizeTooSmall, "torus side " + std::to_string(n) +
                                                " < 3 would identify an edge with its reverse");
    std::vector<Coord> points;
    Coord p(dim, 0);
    while (true) {
        points.push_back(p);
        int i = dim - 1;
        while (i >= 0 && p[i] == sizes[i] - 1) p[i--] = 0;
        if (i < 0) break;
        ++p[i];
    }
    std::vector<SiteId> sites;
    std::vector<Edge> edges;
    for (const auto& q : points) {
        sites.push_back(encode_coord(q));
        for (int i = 0; i < dim; ++i) {
            for (int step : {-1, 1}) {
                Coord r = q;
                r[i] = (r[i] + step + sizes[i]) % sizes[i];
                edges.push_back({encode_coord(q), encode_coord(r)});
            }
        }
    }
    LatticeInfo info{LatticeInfo::Shape::Torus, dim, 0, sizes};
    return Locale::build(std::move(sites), std::move(edges), info);
}

std::int64_t site_diameter(const SiteSet& sites, const Locale& locale) {
    if (sites.empty()) throw Error(Errc::EmptySet, "diameter of the empty set");
    std::int64_t best = 0;
    for (std::size_t i = 0; i < sites.size(); ++i)
        for (std::size_t j = i + 1; j < sites.size(); ++j)
            best = std::max(best, locale.distance(sites[i], sites[j]));
    return best;
}

// ---------------------------------------------------------------------------
// Interaction
// ---------------------------------------------------------------------------

Interaction::Interaction(std::vector<std::string> labels, State base, std::vector<StatePair> phi)
    : labels_(std::move(labels)), base_(base), phi_(std::move(phi)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw Error(Errc::InvalidInteraction, "empty state set");
    if (n > std::numeric_limits<State>::max()) throw Error(Errc::InvalidInteraction, "too many states");
    if (base_ >= n) throw Error(Errc::InvalidInteraction, "base state out of range");
    if (phi_.size() != n * n) throw Error(Errc::InvalidInteraction, "phi must be total on S x S");
    for (const auto& [a, b] : phi_)
        if (a >= n || b >= n) throw Error(Errc::InvalidInteraction, "phi maps outside S x S");
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != n) throw Error(Errc::InvalidInteraction, "duplicate state labels");
}

Interaction Interaction::exclusion() {
    return Interaction({"0", "1"}, 0, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

Interaction Interaction::identity(std::size_t num_states) {
    std::vector<std::string> labels;
    std::vector<StatePair> phi;
    for (std::size_t s = 0; s < num_states; ++s) labels.push_back(std::to_string(s));
    for (std::size_t a = 0; a < num_states; ++a)
        for (std::size_t b = 0; b < num_states; ++b) phi.emplace_back(static_cast<State>(a), static_cast<State>(b));
    return Interaction(std::move(labels), 0, std::move(phi));
}

std::optional<State> Interaction::find_state(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<State>(it - labels_.begin());
}

std::vector<StatePair> Interaction::changed_pairs() const {
    std::vector<StatePair> out;
    for (State a = 0; a < num_states(); ++a)
        for (State b = 0; b < num_states(); ++b)
            if (changes(a, b)) out.emplace_back(a, b);
    return out;
}

InteractionReport validate_interaction(const Interaction& interaction) {
    InteractionReport report;
    const auto swap = [](StatePair p) { return StatePair{p.second, p.first}; };
    for (const auto& pair : interaction.changed_pairs()) {
        const auto image = interaction.apply(pair);
        const auto round_trip = swap(interaction.apply(swap(image)));
        if (round_trip != pair) {
            report.valid = false;
            report.violations.push_back({pair, image, round_trip});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Configuration spaces
// ---------------------------------------------------------------------------

ConfigSpace::ConfigSpace(SiteSet sites, std::size_t num_states, std::uint64_t state_cap)
    : sites_(std::move(sites)), num_states_(num_states) {
    if (num_states_ == 0) throw Error(Errc::InvalidInput, "empty state set");
    size_ = 1;
    strides_.reserve(sites_.size());
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        strides_.push_back(size_);
        if (size_ > state_cap / num_states_)
            throw Error(Errc::SpaceTooLarge, std::to_string(num_states_) + "^" + std::to_string(sites_.size()) +
                                                 " configurations exceed the cap of " + std::to_string(state_cap));
        size_ *= num_states_;
    }
    if (size_ > state_cap)
        throw Error(Errc::SpaceTooLarge, "configuration count exceeds the cap of " + std::to_string(state_cap));
}

ConfigIndex ConfigSpace::encode(std::span<const State> states) const {
    if (states.size() != sites_.size()) throw Error(Errc::SiteSetMismatch, "configuration length mismatch");
    ConfigIndex index = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] >= num_states_) throw Error(Errc::InvalidInput, "state index out of range");
        index += strides_[i] * states[i];
    }
    return index;
}

std::vector<State> ConfigSpace::decode(ConfigIndex index) const {
    std::vector<State> states(sites_.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        states[i] = static_cast<State>(index % num_states_);
        index /= num_states_;
    }
    return states;
}

ConfigIndex ConfigSpace::index_of(const Config& config) const {
    if (!(config.sites == sites_)) throw Error(Errc::SiteSetMismatch, "configuration on another site set");
    return encode(config.states);
}

ConfigSpace enumerate_configs(const SiteSet& sites, const Interaction& interaction, const Caps& caps) {
    return ConfigSpace(sites, interaction.num_states(), caps.state_cap);
}

Projection::Projection(const ConfigSpace& from, const ConfigSpace& to) : num_states_(from.num_states()) {
    if (from.num_states() != to.num_states()) throw Error(Errc::SiteSetMismatch, "state sets differ");
    if (!to.sites().is_subset_of(from.sites()))
        throw Error(Errc::NotSubset, "projection target is not a subset of the source sites");
    for (std::size_t i = 0; i < from.sites().size(); ++i) {
        if (const auto q = to.sites().position(from.sites()[i])) {
            kept_.push_back(i);
            kept_strides_.emplace_back(from.stride(i), to.stride(*q));
        } else {
            dropped_.push_back(i);
        }
    }
    kept_offsets_.assign(to.size(), 0);
    for (ConfigIndex j = 0; j < to.size(); ++j) {
        ConfigIndex rest = j;
        ConfigIndex off = 0;
        for (const auto& [fs, ts] : kept_strides_) {
            (void)ts;
            off += (rest % num_states_) * fs;
            rest /= num_states_;
        }
        kept_offsets_[j] = off;
    }
    ConfigIndex dropped_size = 1;
    for (std::size_t k = 0; k < dropped_.size(); ++k) dropped_size *= num_states_;
    dropped_offsets_.assign(dropped_size, 0);
    for (ConfigIndex j = 0; j < dropped_size; ++j) {
        ConfigIndex rest = j;
        ConfigIndex off = 0;
        for (const auto p : dropped_) {
            off += (rest % num_states_) * from.stride(p);
            rest /= num_states_;
        }
        dropped_offsets_[j] = off;
    }
}

ConfigIndex Projection::operator()(ConfigIndex index) const {
    ConfigIndex out = 0;
    for (const auto& [fs, ts] : kept_strides_) out += ((index / fs) % num_states_) * ts;
    return out;
}

Config apply_transition(const Config& config, const Edge& edge, const Interaction& interaction) {
    const auto po = config.sites.position(edge.origin);
    const auto pt = config.sites.position(edge.target);
    if (!po || !pt) throw Error(Errc::EdgeOutsideSiteSet, "edge " + edge_str(edge) + " leaves the site set");
    Config out = config;
    const auto [a, b] = interaction.apply(config.states[*po], config.states[*pt]);
    out.states[*po] = a;
    out.states[*pt] = b;
    return out;
}

// ---------------------------------------------------------------------------
// Transition graph
// ---------------------------------------------------------------------------

TransitionGraph::TransitionGraph(const Locale& locale, Interaction interaction, const SiteSet& sites,
                                 const Caps& caps)
    : locale_(locale),
      interaction_(std::move(interaction)),
      space_(sites, interaction_.num_states(), caps.state_cap),
      caps_(caps),
      edges_(locale.edges_within(sites)) {
    if (!sites.is_subset_of(locale.sites())) throw Error(Errc::NotSubset, "window sites are not in the locale");
    for (const auto& e : edges_) positions_.emplace_back(*sites.position(e.origin), *sites.position(e.target));
    reverse_.resize(edges_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) reverse_[k] = *edge_index(edges_[k].reversed());
}

std::optional<std::uint32_t> TransitionGraph::edge_index(const Edge& e) const {
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return std::nullopt;
    return static_cast<std::uint32_t>(it - edges_.begin());
}

std::vector<Transition> TransitionGraph::transitions() const {
    std::vector<Transition> out;
    for (ConfigIndex i = 0; i < space_.size(); ++i)
        for (std::uint32_t k = 0; k < edges_.size(); ++k) {
            const auto j = target(i, k);
            if (j != i) out.push_back({i, k, j});
        }
    return out;
}

std::size_t TransitionGraph::count_transitions() const {
    std::size_t n = 0;
    for (ConfigIndex i = 0; i < space_.size(); ++i)
        for (std::uint32_t k = 0; k < edges_.size(); ++k) n += target(i, k) != i;
    return n;
}

std::vector<std::uint32_t> TransitionGraph::component_labels() const {
    detail::UnionFind uf(space_.size());
    for (ConfigIndex i = 0; i < space_.size(); ++i)
        for (std::uint32_t k = 0; k < edges_.size(); ++k) uf.unite(i, target(i, k));
    std::vector<std::uint32_t> labels(space_.size());
    std::map<std::uint64_t, std::uint32_t> numbering;
    for (ConfigIndex i = 0; i < space_.size(); ++i) {
        const auto root = uf.find(i);
        const auto [it, inserted] = numbering.try_emplace(root, static_cast<std::uint32_t>(numbering.size()));
        labels[i] = it->second;
    }
    return labels;
}

std::size_t TransitionGraph::count_components() const {
    const auto labels = component_labels();
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// ---------------------------------------------------------------------------
// Group action
// ---------------------------------------------------------------------------

GroupElement GroupElement::identity(const Locale& locale) {
    GroupElement g;
    for (const auto s : locale.sites()) g.forward_[s] = g.backward_[s] = s;
    return g;
}

GroupElement GroupElement::translation(const Locale& locale, const Coord& shift) {
    const auto& lattice = locale.lattice();
    if (!lattice) throw Error(Errc::InvalidInput, "translations need a lattice locale");
    if (static_cast<int>(shift.size()) != lattice->dim)
        throw Error(Errc::InvalidInput, "shift dimension does not match the lattice");
    GroupElement g;
    for (const auto s : locale.sites()) {
        auto c = decode_coord(s, lattice->dim);
        for (int i = 0; i < lattice->dim; ++i) {
            c[i] += shift[i];
            if (lattice->shape == LatticeInfo::Shape::Torus) {
                const auto n = lattice->torus_sizes[i];
                c[i] = ((c[i] % n) + n) % n;
            }
        }
        bool inside = true;
        for (auto x : c) inside = inside && std::abs(x) < kCoordLimit;
        if (!inside) continue;
        const SiteId t = encode_coord(c);
        if (locale.sites().contains(t)) {
            g.forward_[s] = t;
            g.backward_[t] = s;
        }
    }
    return g;
}

GroupElement GroupElement::from_map(const Locale& locale, std::map<SiteId, SiteId> map) {
    GroupElement g;
    for (const auto& [s, t] : map) {
        if (!locale.sites().contains(s) || !locale.sites().contains(t))
            throw Error(Errc::InvalidInput, "automorphism uses sites outside the locale");
        if (!g.backward_.emplace(t, s).second) throw Error(Errc::InvalidInput, "automorphism is not injective");
    }
    g.forward_ = std::move(map);
    for (const auto& e : locale.edges()) {
        const auto a = g.apply(e.origin);
        const auto b = g.apply(e.target);
        if (a && b && !locale.has_edge({*a, *b}))
            throw Error(Errc::InvalidInput, "map does not preserve edge " + edge_str(e));
    }
    return g;
}

std::optional<SiteId> GroupElement::apply(SiteId site) const {
    const auto it = forward_.find(site);
    if (it == forward_.end()) return std::nullopt;
    return it->second;
}

std::optional<SiteId> GroupElement::apply_inverse(SiteId site) const {
    const auto it = backward_.find(site);
    if (it == backward_.end()) return std::nullopt;
    return it->second;
}

SiteSet GroupElement::apply(const SiteSet& sites) const {
    std::vector<SiteId> out;
    out.reserve(sites.size());
    for (const auto s : sites) {
        const auto t = apply(s);
        if (!t) throw Error(Errc::ActionLeavesWindow, "image of site " + site_str(s) + " leaves the window");
        out.push_back(*t);
    }
    return SiteSet(std::move(out));
}

Edge GroupElement::apply(const Edge& e) const {
    const auto a = apply(e.origin);
    const auto b = apply(e.target);
    if (!a || !b) throw Error(Errc::ActionLeavesWindow, "image of edge " + edge_str(e) + " leaves the window");
    return {*a, *b};
}

GroupElement GroupElement::inverse() const {
    GroupElement g;
    g.forward_ = backward_;
    g.backward_ = forward_;
    return g;
}

Config group_act(const GroupElement& sigma, const Config& config) {
    const SiteSet image = sigma.apply(config.sites);
    Config out{image, std::vector<State>(image.size())};
    for (std::size_t i = 0; i < config.sites.size(); ++i)
        out.states[*image.position(*sigma.apply(config.sites[i]))] = config.states[i];
    return out;
}

}  // namespace colocal
