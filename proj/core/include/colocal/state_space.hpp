#pragma once

#include <colocal/error.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace colocal {

using SiteId = std::int64_t;
using State = std::uint16_t;
using ConfigIndex = std::uint64_t;

struct Edge {
    SiteId origin = 0;
    SiteId target = 0;

    Edge reversed() const { return {target, origin}; }
    auto operator<=>(const Edge&) const = default;
};

// ---------------------------------------------------------------------------
// Lattice coordinates
//
// A point (x_1, ..., x_d) of Z^d is stored as the integer
//     id = x_1 * K^(d-1) + x_2 * K^(d-2) + ... + x_d,      K = 2^20,
// with every |x_i| < 2^19 (balanced base-K digits). The map is a bijection on
// that box and preserves lexicographic order, so the smallest id of a site set
// is its lexicographically smallest point. For d = 1 the id is the coordinate.
// ---------------------------------------------------------------------------

using Coord = std::vector<std::int64_t>;

inline constexpr int kMaxLatticeDim = 3;
inline constexpr std::int64_t kCoordRadix = std::int64_t{1} << 20;
inline constexpr std::int64_t kCoordLimit = kCoordRadix / 2;

SiteId encode_coord(std::span<const std::int64_t> coord);
Coord decode_coord(SiteId id, int dim);

struct LatticeInfo {
    enum class Shape { Box, Cross, Torus };

    Shape shape = Shape::Box;
    int dim = 1;
    /// Box and Cross: sites with every |x_i| <= radius (Cross keeps only the
    /// coordinate axes).
    std::int64_t radius = 0;
    /// Torus: side lengths, sites 0..n_i-1 with periodic identification.
    std::vector<std::int64_t> torus_sizes;
};

/// Sorted, duplicate-free list of site ids. Copies share storage.
class SiteSet {
public:
    SiteSet();
    explicit SiteSet(std::vector<SiteId> sites);
    SiteSet(std::initializer_list<SiteId> sites) : SiteSet(std::vector<SiteId>(sites)) {}

    std::size_t size() const noexcept { return sites_->size(); }
    bool empty() const noexcept { return sites_->empty(); }
    SiteId operator[](std::size_t i) const { return (*sites_)[i]; }
    auto begin() const noexcept { return sites_->begin(); }
    auto end() const noexcept { return sites_->end(); }
    std::span<const SiteId> span() const noexcept { return *sites_; }
    const std::vector<SiteId>& vector() const noexcept { return *sites_; }

    bool contains(SiteId site) const;
    std::optional<std::size_t> position(SiteId site) const;
    bool is_subset_of(const SiteSet& other) const;

    SiteSet intersect(const SiteSet& other) const;
    SiteSet unite(const SiteSet& other) const;
    SiteSet minus(const SiteSet& other) const;

    /// Sub-set selected by a bitmask over positions (bit i = i-th site).
    SiteSet select(std::uint64_t mask) const;
    /// Bitmask over this set's positions of the sites of `subset`.
    std::uint64_t mask_of(const SiteSet& subset) const;

    friend bool operator==(const SiteSet& a, const SiteSet& b) { return a.vector() == b.vector(); }

private:
    std::shared_ptr<const std::vector<SiteId>> sites_;
};

/// A finite, simple, symmetric, connected directed graph. Copies share storage.
class Locale {
public:
    /// Validates and builds a locale. Throws NotSimple, NotSymmetric or
    /// NotConnected.
    static Locale build(std::vector<SiteId> sites, std::vector<Edge> edges,
                        std::optional<LatticeInfo> lattice = std::nullopt);

    const SiteSet& sites() const noexcept { return data_->sites; }
    const std::vector<Edge>& edges() const noexcept { return data_->edges; }
    const std::optional<LatticeInfo>& lattice() const noexcept { return data_->lattice; }
    std::span<const SiteId> neighbors(SiteId site) const;
    bool has_edge(const Edge& e) const;

    /// E_Λ: the directed edges with both endpoints in `sites`, sorted.
    std::vector<Edge> edges_within(const SiteSet& sites) const;

    /// Graph distance in the whole locale (BFS).
    std::int64_t distance(SiteId from, SiteId to) const;

private:
    struct Data {
        SiteSet sites;
        std::vector<Edge> edges;
        std::map<SiteId, std::vector<SiteId>> adjacency;
        std::optional<LatticeInfo> lattice;
    };
    explicit Locale(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

/// Window {-r..r}^d of Z^d with nearest-neighbour edges.
Locale lattice_window(int dim, std::int64_t radius);
/// Union of the coordinate axes of {-r..r}^d (a "plus" shaped window).
Locale lattice_cross(int dim, std::int64_t radius);
/// Discrete torus with the given side lengths. Throws SizeTooSmall if any
/// side is < 3.
Locale lattice_torus(std::vector<std::int64_t> sizes);

/// Max graph distance between two sites of `sites`, measured in `locale`.
/// Throws EmptySet.
std::int64_t site_diameter(const SiteSet& sites, const Locale& locale);

// ---------------------------------------------------------------------------
// Interaction
// ---------------------------------------------------------------------------

using StatePair = std::pair<State, State>;

class Interaction {
public:
    /// `phi` lists the image of every pair (s1, s2) at index s1 * n + s2.
    Interaction(std::vector<std::string> labels, State base, std::vector<StatePair> phi);

    /// Exclusion process: S = {0, 1}, base 0, phi = swap.
    static Interaction exclusion();
    /// phi = id on n states labelled "0".."n-1".
    static Interaction identity(std::size_t num_states);

    std::size_t num_states() const noexcept { return labels_.size(); }
    State base() const noexcept { return base_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(State s) const { return labels_.at(s); }
    std::optional<State> find_state(const std::string& label) const;

    StatePair apply(State s1, State s2) const { return phi_[s1 * labels_.size() + s2]; }
    StatePair apply(StatePair p) const { return apply(p.first, p.second); }
    bool changes(State s1, State s2) const { return apply(s1, s2) != StatePair{s1, s2}; }
    /// All (s1, s2) with phi(s1, s2) != (s1, s2), in lexicographic order.
    std::vector<StatePair> changed_pairs() const;

private:
    std::vector<std::string> labels_;
    State base_;
    std::vector<StatePair> phi_;
};

struct InteractionViolation {
    StatePair pair;
    StatePair image;       // phi(pair)
    StatePair round_trip;  // swap . phi . swap . phi (pair)
};

struct InteractionReport {
    bool valid = true;
    std::vector<InteractionViolation> violations;
};

/// Checks swap.phi.swap.phi(s) = s on every changed pair.
InteractionReport validate_interaction(const Interaction& interaction);

// ---------------------------------------------------------------------------
// Configurations
// ---------------------------------------------------------------------------

struct Caps {
    std::uint64_t state_cap = std::uint64_t{1} << 20;
    std::size_t subset_cap = 16;
};

struct Config {
    SiteSet sites;
    std::vector<State> states;

    friend bool operator==(const Config&, const Config&) = default;
};

/// S^Λ with the mixed-radix encoding: the state at the i-th site of Λ is the
/// digit of weight |S|^i (first site least significant).
class ConfigSpace {
public:
    ConfigSpace() = default;
    /// Throws SpaceTooLarge if |S|^|Λ| exceeds `state_cap`.
    ConfigSpace(SiteSet sites, std::size_t num_states,
                std::uint64_t state_cap = Caps{}.state_cap);

    const SiteSet& sites() const noexcept { return sites_; }
    std::size_t num_states() const noexcept { return num_states_; }
    ConfigIndex size() const noexcept { return size_; }
    ConfigIndex stride(std::size_t position) const { return strides_[position]; }

    State digit(ConfigIndex index, std::size_t position) const {
        return static_cast<State>((index / strides_[position]) % num_states_);
    }
    ConfigIndex encode(std::span<const State> states) const;
    std::vector<State> decode(ConfigIndex index) const;
    Config config(ConfigIndex index) const { return {sites_, decode(index)}; }
    ConfigIndex index_of(const Config& config) const;

    friend bool operator==(const ConfigSpace& a, const ConfigSpace& b) {
        return a.num_states_ == b.num_states_ && a.sites_ == b.sites_;
    }

private:
    SiteSet sites_;
    std::size_t num_states_ = 1;
    ConfigIndex size_ = 1;
    std::vector<ConfigIndex> strides_;
};

/// enumerate_configs.
ConfigSpace enumerate_configs(const SiteSet& sites, const Interaction& interaction,
                              const Caps& caps = {});

/// Splits a space S^Λ' into the product S^Λ x S^(Λ'∖Λ) for a subset Λ.
/// Every index of S^Λ' is kept_offset(j) + dropped_offset(k) for unique j, k.
class Projection {
public:
    /// Throws NotSubset.
    Projection(const ConfigSpace& from, const ConfigSpace& to);

    /// pr_Λ on indices.
    ConfigIndex operator()(ConfigIndex index) const;

    /// Indexed by configurations of the subset.
    const std::vector<ConfigIndex>& kept_offsets() const noexcept { return kept_offsets_; }
    /// Indexed by configurations of the dropped sites (in `from` order).
    const std::vector<ConfigIndex>& dropped_offsets() const noexcept { return dropped_offsets_; }
    /// Positions (in `from`) of the sites that are not in `to`.
    const std::vector<std::size_t>& dropped() const noexcept { return dropped_; }
    const std::vector<std::size_t>& kept() const noexcept { return kept_; }

private:
    std::size_t num_states_;
    std::vector<std::size_t> kept_;
    std::vector<std::size_t> dropped_;
    std::vector<std::pair<ConfigIndex, ConfigIndex>> kept_strides_;  // (from, to)
    std::vector<ConfigIndex> kept_offsets_;
    std::vector<ConfigIndex> dropped_offsets_;
};

/// η^e. Throws EdgeOutsideSiteSet.
Config apply_transition(const Config& config, const Edge& edge, const Interaction& interaction);

struct Transition {
    ConfigIndex from;
    std::uint32_t edge;  // index into TransitionGraph::edges()
    ConfigIndex to;
};

/// (S^Λ, Φ_Λ): targets are computed on demand; one record per (η, e) with
/// η^e != η.
class TransitionGraph {
public:
    TransitionGraph(const Locale& locale, Interaction interaction, const SiteSet& sites,
                    const Caps& caps = {});

    const Locale& locale() const noexcept { return locale_; }
    const Interaction& interaction() const noexcept { return interaction_; }
    const ConfigSpace& space() const noexcept { return space_; }
    const SiteSet& sites() const noexcept { return space_.sites(); }
    const Caps& caps() const noexcept { return caps_; }

    /// E_Λ, sorted.
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::optional<std::uint32_t> edge_index(const Edge& e) const;
    std::uint32_t reverse_edge(std::uint32_t k) const { return reverse_[k]; }

    ConfigIndex target(ConfigIndex index, std::uint32_t edge) const {
        const auto [po, pt] = positions_[edge];
        const State a = space_.digit(index, po);
        const State b = space_.digit(index, pt);
        const auto [a2, b2] = interaction_.apply(a, b);
        return index + (static_cast<ConfigIndex>(a2) - a) * space_.stride(po) +
               (static_cast<ConfigIndex>(b2) - b) * space_.stride(pt);
    }

    /// Materialized transition records, ordered by (from, edge).
    std::vector<Transition> transitions() const;
    std::size_t count_transitions() const;

    /// Component label per configuration; labels are numbered in order of the
    /// smallest configuration index they contain.
    std::vector<std::uint32_t> component_labels() const;
    std::size_t count_components() const;

private:
    Locale locale_;
    Interaction interaction_;
    ConfigSpace space_;
    Caps caps_;
    std::vector<Edge> edges_;
    std::vector<std::pair<std::size_t, std::size_t>> positions_;
    std::vector<std::uint32_t> reverse_;
};

// ---------------------------------------------------------------------------
// Group action by locale automorphisms
// ---------------------------------------------------------------------------

/// A site bijection of a locale, possibly partial when the locale is a finite
/// window of a larger graph (e.g. a lattice translation near the boundary).
class GroupElement {
public:
    static GroupElement identity(const Locale& locale);
    /// Translation by `shift` on a lattice window or torus. On windows it is
    /// defined on the sites whose image stays inside.
    static GroupElement translation(const Locale& locale, const Coord& shift);
    /// Explicit map. Throws InvalidInput unless it is injective and maps
    /// edges between mapped sites onto edges.
    static GroupElement from_map(const Locale& locale, std::map<SiteId, SiteId> map);

    std::optional<SiteId> apply(SiteId site) const;
    std::optional<SiteId> apply_inverse(SiteId site) const;
    /// Image of a site set. Throws ActionLeavesWindow.
    SiteSet apply(const SiteSet& sites) const;
    Edge apply(const Edge& e) const;
    GroupElement inverse() const;

private:
    std::map<SiteId, SiteId> forward_;
    std::map<SiteId, SiteId> backward_;
};

/// (ση)_{σx} = η_x.
Config group_act(const GroupElement& sigma, const Config& config);

}  // namespace colocal
