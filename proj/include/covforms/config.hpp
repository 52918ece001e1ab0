#pragma once

/// @file config.hpp
/// Scenario configuration: a flat key-value document with [sections].
/// Parsing is strict: unknown keys and sections are errors, and messages
/// carry line numbers. See README for the full key reference.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace covforms {

enum class Scenario { symplectic, kaehler, special_complex, custom };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    Scenario scenario = Scenario::custom;
    // [grid]
    int n = 0;
    std::vector<int> sizes;
    std::vector<double> spacings;
    // [bundle]
    std::string connection = "trivial";
    int rank = 1;  ///< custom scenario only; others derive the rank
    // top level
    int k = 0;  ///< fixed by scenario except custom
    std::uint64_t seed = 0;
    std::string init = "closed";
    std::string out_dir = "out";
    // [flow]
    std::string step = "auto";  ///< "auto" or a positive real
    int max_steps = 2000;
    bool project_each_step = false;
    bool renormalize = false;
};

/// Parses a configuration document. Throws ConfigError with line-precise
/// messages; fills documented defaults (step = auto, max_steps = 2000,
/// seed = 0, init = closed, connection = trivial).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace covforms
