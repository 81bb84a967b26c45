#pragma once

#include "rsmec/mc.hpp"
#include "rsmec/types.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace rsmec {

// Configuration problem tied to a specific key; the CLI turns these into
// exit code 1 with the field name in the message.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error("config field '" + field + "': " + what), field(field) {}
    std::string field;
};

// Parsed flat key = value file. Unknown keys are rejected. See the README
// for the schema.
struct RunConfig {
    mc::SweepSpec sweep;          // axis/values only meaningful if has_axis
    bool has_axis = false;
    std::optional<double> g1;     // fixed channel for single-instance runs
    std::optional<double> g2;
};

RunConfig load_config(const std::string& path);
RunConfig default_config();

}  // namespace rsmec
