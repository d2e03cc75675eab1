#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

bool write_report(const std::string& path, const nlohmann::json& report) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return bool(std::cout);
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    return bool(out);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace colocal;
    using nlohmann::json;

    CLI::App app{"Exact computations on finite windows of interacting particle systems", "colocal"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string input_path;
    std::string output_path;
    std::string mode = "exact";
    double tolerance = 1e-9;
    cli::RunConfig config;
    app.add_option("--input,-i", input_path, "Input JSON file, or - for stdin")->required();
    app.add_option("--output,-o", output_path, "Report path (stdout when omitted)");
    app.add_option("--state-cap", config.caps.state_cap, "Largest |S|^|Λ| to enumerate")
        ->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--subset-cap", config.caps.subset_cap, "Largest window for subset enumeration")
        ->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--mode", mode, "Scalar field")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
    auto* tol = app.add_option("--tolerance", tolerance, "Equality tolerance in float mode")->check(CLI::PositiveNumber);

    const std::map<std::string, std::string> help{
        {"conserved", "Basis of conserved quantities of an interaction"},
        {"iq", "Irreducible quantification check on a list of locales"},
        {"expand", "Martingale expansion and uniform radius of a function"},
        {"project", "Conditional expectation of a function or a form"},
        {"closed", "Closedness test with potential or witness cycle"},
        {"dims", "Kernel and closed-form dimensions of a window"},
        {"varadhan", "Cocycle decomposition of a shift-invariant closed form"},
        {"martingale", "L2 norms along a chain of windows"},
    };
    for (const auto& name : cli::command_names()) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
        if (tol->count() > 0 && mode != "float") throw CLI::ValidationError("--tolerance", "only valid with --mode float");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    config.command = app.get_subcommands().front()->get_name();
    config.exact = mode == "exact";
    if (!config.exact) set_float_tolerance(tolerance);

    std::string text;
    if (input_path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        text = buffer.str();
    } else {
        std::ifstream in(input_path, std::ios::binary);
        if (!in) {
            std::cerr << "cannot read " << input_path << "\n";
            return kExitUsage;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }

    json report{{"schema_version", cli::kSchemaVersion}, {"command", config.command}, {"mode", mode}};
    int status = 0;
    try {
        report["result"] = cli::run_command(config, json::parse(text));
    } catch (const Error& e) {
        report["error"] = json{{"name", std::string(e.name())}, {"message", e.what()}};
        status = kExitDomain;
    } catch (const json::exception& e) {
        report["error"] = json{{"name", std::string(errc_name(Errc::InvalidInput))}, {"message", e.what()}};
        status = kExitDomain;
    }
    if (!write_report(output_path, report)) {
        std::cerr << "cannot write " << output_path << "\n";
        return kExitUsage;
    }
    return status;
}
