#pragma once

#include <colocal/forms.hpp>
#include <colocal/functions.hpp>
#include <colocal/l2.hpp>
#include <colocal/measure.hpp>
#include <colocal/state_space.hpp>
#include <colocal/varadhan.hpp>

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace colocal::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

[[noreturn]] inline void bad_input(const std::string& what) { throw Error(Errc::InvalidInput, what); }

inline const json& require(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) bad_input(std::string("missing field \"") + key + "\"");
    return doc.at(key);
}

/// Scalars are "p/q" strings, integers or decimals.
template <class T>
T read_scalar(const json& v) {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_number()) text = v.dump();
    else bad_input("expected a scalar, got " + v.dump());
    if constexpr (scalar_traits<T>::exact) return parse_rational(text);
    else return scalar_traits<double>::from_rational(parse_rational(text));
}

template <class T>
json write_scalar(const T& x) {
    if constexpr (scalar_traits<T>::exact) return scalar_traits<T>::format(x);
    else return x;
}

template <class T>
std::vector<T> read_scalars(const json& v) {
    if (!v.is_array()) bad_input("expected an array of scalars");
    std::vector<T> out;
    for (const auto& x : v) out.push_back(read_scalar<T>(x));
    return out;
}

template <class T>
json write_scalars(const std::vector<T>& xs) {
    json out = json::array();
    for (const auto& x : xs) out.push_back(write_scalar(x));
    return out;
}

SiteId read_site(const json& v);
SiteSet read_sites(const json& v);
json write_sites(const SiteSet& sites);

Interaction read_interaction(const json& v);
State read_state(const json& v, const Interaction& interaction);

Locale read_locale(const json& v);
/// Defaults to the standard IQ test locales when `v` is null.
std::vector<Locale> read_locales(const json& v);

/// Either a product measure (`nu`, optional `per_site`) or explicit window
/// weights (`window_masses`, indexed like function tables).
template <class T>
struct MeasureSpec {
    ProductMeasure<T> product;
    std::optional<std::vector<T>> window_masses;

    WindowMeasure<T> on(const ConfigSpace& space) const {
        if (!window_masses) return product.on(space);
        return WindowMeasure<T>::from_masses(space, *window_masses);
    }
    /// The product form, recovered from window masses when they factorize.
    ProductMeasure<T> as_product_measure(const ConfigSpace& space) const {
        if (!window_masses) return product;
        auto recovered = colocal::as_product(on(space));
        if (!recovered) throw Error(Errc::NonProductMeasure, "window measure does not factorize over sites");
        return *recovered;
    }
};

template <class T>
MeasureSpec<T> read_measure(const json& v, const Interaction& interaction) {
    const auto n = interaction.num_states();
    if (v.is_null()) return {ProductMeasure<T>(StateMeasure<T>::uniform(n)), std::nullopt};
    auto state_measure = [&](const json& w) {
        StateMeasure<T> nu(read_scalars<T>(w));
        if (nu.num_states() != n) bad_input("measure size differs from the number of states");
        return nu;
    };
    StateMeasure<T> nu = v.contains("nu") ? state_measure(v.at("nu")) : StateMeasure<T>::uniform(n);
    std::map<SiteId, StateMeasure<T>> per_site;
    if (v.contains("per_site")) {
        for (const auto& entry : v.at("per_site")) per_site.emplace(read_site(require(entry, "site")), state_measure(require(entry, "nu")));
    }
    MeasureSpec<T> spec{ProductMeasure<T>(std::move(nu), std::move(per_site)), std::nullopt};
    if (v.contains("window_masses")) spec.window_masses = read_scalars<T>(v.at("window_masses"));
    return spec;
}

/// `values` in mixed-radix order (first site least significant), or `terms`:
/// Σ coef Π [η_site = state].
template <class T>
FnTable<T> read_function(const json& v, const ConfigSpace& space, const Interaction& interaction) {
    if (v.contains("values")) return FnTable<T>(space, read_scalars<T>(v.at("values")));
    FnTable<T> f(space);
    for (const auto& term : require(v, "terms")) {
        const T coef = term.contains("coef") ? read_scalar<T>(term.at("coef")) : T(1);
        std::vector<std::pair<std::size_t, State>> factors;
        for (const auto& factor : require(term, "factors")) {
            const SiteId site = read_site(require(factor, "site"));
            const auto pos = space.sites().position(site);
            if (!pos) throw Error(Errc::NotSubset, "term uses site " + std::to_string(site) + " outside the window");
            factors.emplace_back(*pos, read_state(require(factor, "state"), interaction));
        }
        for (ConfigIndex i = 0; i < f.size(); ++i) {
            bool hit = true;
            for (const auto& [pos, s] : factors) hit = hit && space.digit(i, pos) == s;
            if (hit) f[i] += coef;
        }
    }
    return f;
}

template <class T>
json write_function(const FnTable<T>& f) {
    return json{{"sites", write_sites(f.sites())}, {"values", write_scalars(f.values())}};
}

/// `edges`: [{edge: [x, y], values | terms}] for stored orientations x < y;
/// missing edges are zero. `potential`: ∂ of a function.
template <class T>
Form<T> read_form(const json& v, const TransitionGraph& graph) {
    if (v.contains("potential")) return differential(read_function<T>(v.at("potential"), graph.space(), graph.interaction()), graph);
    Form<T> zero(graph);
    std::vector<FnTable<T>> stored = zero.stored_tables();
    for (const auto& entry : require(v, "edges")) {
        const auto& e = require(entry, "edge");
        if (!e.is_array() || e.size() != 2) bad_input("edge must be a pair of sites");
        const Edge edge{read_site(e[0]), read_site(e[1])};
        if (edge.origin >= edge.target) bad_input("form edges are given with origin < target");
        const auto k = graph.edge_index(edge);
        if (!k) throw Error(Errc::EdgeOutsideSiteSet, "edge (" + std::to_string(edge.origin) + "," + std::to_string(edge.target) + ") is not in the window");
        const auto& slots = zero.stored_edges();
        const auto slot = static_cast<std::size_t>(std::find(slots.begin(), slots.end(), *k) - slots.begin());
        stored[slot] = read_function<T>(entry, graph.space(), graph.interaction());
    }
    return Form<T>(graph, std::move(stored));
}

template <class T>
json write_form(const Form<T>& form) {
    json edges = json::array();
    for (std::size_t slot = 0; slot < form.stored_edges().size(); ++slot) {
        const Edge e = form.graph().edges()[form.stored_edges()[slot]];
        edges.push_back(json{{"edge", {e.origin, e.target}}, {"values", write_scalars(form.stored_tables()[slot].values())}});
    }
    return json{{"sites", write_sites(form.space().sites())}, {"edges", edges}};
}

inline json write_path(const Path& path) {
    json edges = json::array();
    for (const auto& e : path.edges) edges.push_back({e.origin, e.target});
    return json{{"start", path.start}, {"edges", edges}};
}

}  // namespace colocal::cli
