#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhedge/model.hpp"
#include "qhedge/payoff.hpp"

namespace qhedge {

// Parsed key-value run configuration (see docs/config.md for the schema).
// Unknown keys are rejected with a line diagnostic.
struct RunConfig {
    std::string model_family;
    std::map<std::string, std::string> raw;  // key -> value, validated

    double horizon = 1.0;

    // numeric section
    double quad_tol = 1e-8;
    double trunc_tol = 1e-12;
    double density_trunc = 40.0;
    double density_step = 0.2;
    std::size_t x_points = 321;

    // simulate section
    std::size_t paths = 100000;
    std::size_t steps = 200;
    std::uint64_t seed = 1;
    std::string strategy = "vo-feedback";

    Model make_model() const;
    ComplexMeasure make_payoff() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Every key the parser accepts, for --help.
const std::vector<std::string>& config_keys();

}  // namespace qhedge
