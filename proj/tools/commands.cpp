#include "commands.hpp"

#include <colocal/linalg.hpp>

#include <functional>
#include <map>

namespace colocal::cli {
namespace {

// Shared context of the window-based subcommands.
struct Setting {
    Interaction interaction;
    Locale locale;
    SiteSet window;
};

Setting read_setting(const json& doc) {
    Interaction interaction = read_interaction(require(doc, "interaction"));
    Locale locale = read_locale(require(doc, "locale"));
    SiteSet window = doc.contains("window") ? read_sites(doc.at("window")) : locale.sites();
    if (!window.is_subset_of(locale.sites())) throw Error(Errc::NotSubset, "window is not inside the locale");
    return {std::move(interaction), std::move(locale), std::move(window)};
}

json write_config(const ConfigSpace& space, ConfigIndex index, const Interaction& interaction) {
    json states = json::array();
    for (const auto s : space.decode(index)) states.push_back(interaction.label(s));
    return json{{"index", index}, {"states", states}};
}

template <class T>
json write_norm(const L2Norm<T>& n) {
    return json{{"squared", write_scalar(n.squared)}, {"root", n.root}};
}

template <class T>
json write_basis(const std::vector<ConservedQuantity<T>>& basis) {
    json out = json::array();
    for (const auto& xi : basis) out.push_back(write_scalars(xi.xi));
    return out;
}

template <class T>
json conserved(const json& doc, const Caps&) {
    const auto interaction = read_interaction(require(doc, "interaction"));
    const auto measure = read_measure<T>(doc.value("measure", json()), interaction);
    const auto basis = conserved_quantities(interaction, measure.product.base());
    return json{{"states", interaction.labels()}, {"dimension", basis.size()}, {"basis", write_basis(basis)}};
}

template <class T>
json iq(const json& doc, const Caps& caps) {
    const auto interaction = read_interaction(require(doc, "interaction"));
    const auto measure = read_measure<T>(doc.value("measure", json()), interaction);
    const auto locales = read_locales(doc.value("locales", json()));
    const auto report = check_iq(interaction, measure.product.base(), locales, caps);
    json per_locale = json::array();
    for (std::size_t i = 0; i < locales.size(); ++i) {
        const auto& r = report.locales[i];
        json entry{{"sites", write_sites(locales[i].sites())},
                   {"configurations", r.configurations},
                   {"components", r.components},
                   {"level_sets", r.level_sets},
                   {"holds", r.holds}};
        if (r.witness) {
            const ConfigSpace space(locales[i].sites(), interaction.num_states(), caps.state_cap);
            entry["witness"] = json{{"first", write_config(space, r.witness->first, interaction)},
                                    {"second", write_config(space, r.witness->second, interaction)}};
        }
        per_locale.push_back(std::move(entry));
    }
    return json{{"holds", report.holds}, {"conserved_dimension", report.conserved_dimension}, {"locales", per_locale}};
}

template <class T>
json expand(const json& doc, const Caps& caps) {
    const auto setting = read_setting(doc);
    const auto measure = read_measure<T>(doc.value("measure", json()), setting.interaction);
    const auto space = enumerate_configs(setting.window, setting.interaction, caps);
    // The subset cap is a property of the window, checked before tabulation.
    if (setting.window.size() > caps.subset_cap)
        throw Error(Errc::TooManySubsets, std::to_string(setting.window.size()) + " sites exceed the subset cap of " +
                                              std::to_string(caps.subset_cap));
    const auto f = read_function<T>(require(doc, "function"), space, setting.interaction);
    const auto expansion = measure.window_masses ? expand_martingale(f, measure.on(space), caps)
                                                 : expand_martingale(f, measure.product, caps);
    json components = json::array();
    for (const auto& [mask, component] : expansion.components)
        if (!component.is_zero()) components.push_back(write_function(component));
    const auto radius = uniform_radius(expansion, setting.locale);
    json radius_json{{"radius", radius.radius}, {"witness", nullptr}};
    if (radius.witness) radius_json["witness"] = write_sites(expansion.sites.select(*radius.witness));
    return json{{"sites", write_sites(expansion.sites)},
                {"subsets", expansion.components.size()},
                {"components", components},
                {"sum_matches", expansion.reconstruct(space).equals(f)},
                {"uniform_radius", radius_json}};
}

template <class T>
json project(const json& doc, const Caps& caps) {
    const auto setting = read_setting(doc);
    const auto measure = read_measure<T>(doc.value("measure", json()), setting.interaction);
    const SiteSet subset = read_sites(require(doc, "subset"));
    if (doc.contains("form")) {
        const TransitionGraph graph(setting.locale, setting.interaction, setting.window, caps);
        const auto form = read_form<T>(doc.at("form"), graph);
        const auto projected = measure.window_masses ? project_form(form, subset, measure.on(graph.space()))
                                                     : project_form(form, subset, measure.product);
        return json{{"kind", "form"}, {"form", write_form(projected)}};
    }
    const auto space = enumerate_configs(setting.window, setting.interaction, caps);
    const auto f = read_function<T>(require(doc, "function"), space, setting.interaction);
    return json{{"kind", "function"}, {"function", write_function(conditional_expectation(f, subset, measure.on(space)))}};
}

template <class T>
json closed(const json& doc, const Caps& caps) {
    const auto setting = read_setting(doc);
    const auto measure = read_measure<T>(doc.value("measure", json()), setting.interaction);
    const TransitionGraph graph(setting.locale, setting.interaction, setting.window, caps);
    const auto form = read_form<T>(require(doc, "form"), graph);
    const auto result = solve_potential(form, measure.on(graph.space()));
    json out{{"closed", result.closed}};
    if (result.closed) {
        out["potential"] = write_function(*result.potential);
    } else {
        out["witness"] = write_path(*result.witness);
        out["witness_integral"] = write_scalar(*result.witness_integral);
    }
    return out;
}

template <class T>
json dims(const json& doc, const Caps& caps) {
    const auto setting = read_setting(doc);
    const auto measure = read_measure<T>(doc.value("measure", json()), setting.interaction);
    const TransitionGraph graph(setting.locale, setting.interaction, setting.window, caps);
    const auto k = kernel_basis(graph, measure.on(graph.space()));
    return json{{"configurations", graph.space().size()},
                {"transitions", graph.count_transitions()},
                {"components", k.dim_kernel},
                {"dim_C0", k.dim_c0},
                {"dim_kernel", k.dim_kernel},
                {"dim_kernel_C0", k.dim_kernel_c0},
                {"dim_Z1", k.dim_z1}};
}

template <class T>
json varadhan(const json& doc, const Caps& caps) {
    const auto interaction = read_interaction(require(doc, "interaction"));
    const auto measure = read_measure<T>(doc.value("measure", json()), interaction);
    const auto& nu = measure.product.base();
    const Locale locale = read_locale(require(doc, "locale"));
    const TransitionGraph graph(locale, interaction, locale.sites(), caps);
    const int margin = doc.value("margin", 2);
    const int dim = locale.lattice() ? locale.lattice()->dim : 1;
    const auto basis = conserved_quantities(interaction, nu);

    json out{{"basis", write_basis(basis)}, {"margin", margin}};
    std::optional<Form<T>> omega;
    std::optional<Cocycle<T>> rho;
    std::optional<Form<T>> exact;
    if (doc.contains("form")) {
        omega = read_form<T>(doc.at("form"), graph);
    } else {
        rho = Cocycle<T>::zero(dim, basis);
        const auto& rows = require(require(doc, "cocycle"), "generator");
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(dim)) bad_input("cocycle needs one row per lattice direction");
        for (int i = 0; i < dim; ++i) {
            rho->coefficients[i] = read_scalars<T>(rows[i]);
            if (rho->coefficients[i].size() != basis.size()) bad_input("cocycle rows must match the conserved basis size");
        }
        omega = omega_from_cocycle(*rho, graph);
        exact = Form<T>(graph);
        if (doc.contains("stencil")) {
            const auto& stencil = doc.at("stencil");
            const ConfigSpace space(read_sites(require(stencil, "sites")), interaction.num_states(), caps.state_cap);
            const auto g0 = read_function<T>(stencil, space, interaction);
            *exact = differential(invariant_function(g0, graph, measure.product), graph);
            *omega += *exact;
        }
    }
    const auto d = decompose_invariant_form(InvariantFormSpec<T>{*omega, margin}, nu);
    json generator = json::array();
    for (const auto& row : d.cocycle.coefficients) generator.push_back(write_scalars(row));
    json interiors = json::array();
    for (const auto& w : d.interiors) {
        if (dim == 1) {
            interiors.push_back(write_sites(w));
            continue;
        }
        json coords = json::array();
        for (const auto x : w) coords.push_back(decode_coord(x, dim));
        interiors.push_back(coords);
    }
    out["cocycle"] = json{{"generator", generator}};
    out["interiors"] = interiors;
    out["potential_invariant"] = d.potential_invariant;
    out["exact_part_zero"] = d.exact_part.is_zero();
    if (rho) {
        out["cocycle_recovered"] = d.cocycle.equals(*rho);
        out["exact_part_recovered"] = d.exact_part.equals(*exact);
    }
    return out;
}

template <class T>
json martingale(const json& doc, const Caps& caps) {
    const auto interaction = read_interaction(require(doc, "interaction"));
    const auto measure = read_measure<T>(doc.value("measure", json()), interaction);
    std::vector<SiteSet> chain;
    for (const auto& w : require(doc, "chain")) chain.push_back(read_sites(w));
    if (chain.empty()) throw Error(Errc::EmptySet, "the chain has no windows");
    const auto space = enumerate_configs(chain.back(), interaction, caps);
    const auto f = read_function<T>(require(doc, "function"), space, interaction);
    const auto r = martingale_chain_report(f, chain, measure.as_product_measure(space));
    json windows = json::array(), norms = json::array(), gaps = json::array();
    for (const auto& w : r.windows) windows.push_back(write_sites(w));
    for (const auto& n : r.norms) norms.push_back(write_norm(n));
    for (const auto& g : r.gaps) gaps.push_back(write_norm(g));
    return json{{"windows", windows}, {"norms", norms},           {"gaps", gaps},
                {"sup", write_norm(r.sup)}, {"monotone", r.monotone}, {"pythagoras", r.pythagoras}};
}

template <class T>
using Handler = json (*)(const json&, const Caps&);

template <class T>
const std::map<std::string, Handler<T>>& handlers() {
    static const std::map<std::string, Handler<T>> table{
        {"conserved", &conserved<T>}, {"iq", &iq<T>},         {"expand", &expand<T>},   {"project", &project<T>},
        {"closed", &closed<T>},       {"dims", &dims<T>},     {"varadhan", &varadhan<T>}, {"martingale", &martingale<T>},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"conserved", "iq", "expand", "project", "closed", "dims", "varadhan", "martingale"};
    return names;
}

json run_command(const RunConfig& config, const json& input) {
    if (!input.is_object()) bad_input("input must be a JSON object");
    if (input.contains("schema_version") && input.at("schema_version") != kSchemaVersion)
        bad_input("unsupported schema_version " + input.at("schema_version").dump());
    if (config.exact) return handlers<Rational>().at(config.command)(input, config.caps);
    return handlers<double>().at(config.command)(input, config.caps);
}

}  // namespace colocal::cli
