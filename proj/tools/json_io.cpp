#include "json_io.hpp"

#include <set>

namespace colocal::cli {

SiteId read_site(const json& v) {
    if (v.is_number_integer()) return v.get<SiteId>();
    if (v.is_array()) {
        Coord c;
        for (const auto& x : v) {
            if (!x.is_number_integer()) bad_input("lattice coordinates must be integers");
            c.push_back(x.get<std::int64_t>());
        }
        return encode_coord(c);
    }
    bad_input("expected a site id or coordinate, got " + v.dump());
}

SiteSet read_sites(const json& v) {
    if (!v.is_array()) bad_input("expected an array of sites");
    std::vector<SiteId> out;
    for (const auto& x : v) out.push_back(read_site(x));
    const std::set<SiteId> unique(out.begin(), out.end());
    if (unique.size() != out.size()) bad_input("repeated site in a site list");
    return SiteSet(std::move(out));
}

json write_sites(const SiteSet& sites) { return json(sites.vector()); }

State read_state(const json& v, const Interaction& interaction) {
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        if (s < 0 || static_cast<std::size_t>(s) >= interaction.num_states()) bad_input("state index out of range");
        return static_cast<State>(s);
    }
    if (v.is_string()) {
        if (const auto s = interaction.find_state(v.get<std::string>())) return *s;
        bad_input("unknown state label \"" + v.get<std::string>() + "\"");
    }
    bad_input("expected a state label or index, got " + v.dump());
}

Interaction read_interaction(const json& v) {
    if (v.is_string() && v.get<std::string>() == "exclusion") return Interaction::exclusion();
    if (v.is_object() && v.contains("preset")) {
        const auto preset = v.at("preset").get<std::string>();
        if (preset == "exclusion") return Interaction::exclusion();
        if (preset == "identity") return Interaction::identity(require(v, "states").get<std::size_t>());
        bad_input("unknown interaction preset \"" + preset + "\"");
    }
    const auto& labels_json = require(v, "states");
    if (!labels_json.is_array() || labels_json.empty()) bad_input("states must be a nonempty array of labels");
    std::vector<std::string> labels;
    for (const auto& l : labels_json) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    const std::size_t n = labels.size();
    // Identity everywhere except the listed pairs.
    std::vector<StatePair> phi(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) phi[a * n + b] = {static_cast<State>(a), static_cast<State>(b)};
    const Interaction scaffold(labels, 0, phi);
    const State base = v.contains("base") ? read_state(v.at("base"), scaffold) : State{0};
    auto read_pair = [&](const json& p) {
        if (!p.is_array() || p.size() != 2) bad_input("state pairs are two-element arrays");
        return StatePair{read_state(p[0], scaffold), read_state(p[1], scaffold)};
    };
    if (v.contains("phi")) {
        for (const auto& rule : v.at("phi")) {
            const auto from = read_pair(require(rule, "from"));
            phi[from.first * n + from.second] = read_pair(require(rule, "to"));
        }
    }
    Interaction out(std::move(labels), base, std::move(phi));
    const auto report = validate_interaction(out);
    if (!report.valid) {
        const auto& bad = report.violations.front();
        throw Error(Errc::InvalidInteraction, "swap.phi.swap.phi fails at (" + out.label(bad.pair.first) + "," +
                                                  out.label(bad.pair.second) + ")");
    }
    return out;
}

Locale read_locale(const json& v) {
    if (v.contains("lattice")) {
        const auto& l = v.at("lattice");
        const auto shape = l.value("shape", std::string("box"));
        if (shape == "torus") return lattice_torus(require(l, "sizes").get<std::vector<std::int64_t>>());
        const int dim = require(l, "dim").get<int>();
        const auto radius = require(l, "radius").get<std::int64_t>();
        if (shape == "box") return lattice_window(dim, radius);
        if (shape == "cross") return lattice_cross(dim, radius);
        bad_input("unknown lattice shape \"" + shape + "\"");
    }
    const SiteSet sites = read_sites(require(v, "sites"));
    // Edges are undirected; both orientations are added.
    std::set<Edge> edges;
    for (const auto& e : require(v, "edges")) {
        if (!e.is_array() || e.size() != 2) bad_input("edge must be a pair of sites");
        const Edge edge{read_site(e[0]), read_site(e[1])};
        edges.insert(edge);
        edges.insert(edge.reversed());
    }
    return Locale::build(sites.vector(), std::vector<Edge>(edges.begin(), edges.end()));
}

std::vector<Locale> read_locales(const json& v) {
    if (v.is_null()) {
        return {Locale::build({0, 1}, {{0, 1}, {1, 0}}),
                Locale::build({0, 1, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}),
                Locale::build({0, 1, 2}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}})};
    }
    if (!v.is_array()) bad_input("locales must be an array");
    std::vector<Locale> out;
    for (const auto& l : v) out.push_back(read_locale(l));
    return out;
}

}  // namespace colocal::cli
