#pragma once

#include "json_io.hpp"

#include <string>
#include <vector>

namespace colocal::cli {

struct RunConfig {
    std::string command;
    Caps caps;
    bool exact = true;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand on a parsed input document and returns the report body.
/// Domain failures propagate as colocal::Error.
json run_command(const RunConfig& config, const json& input);

}  // namespace colocal::cli
