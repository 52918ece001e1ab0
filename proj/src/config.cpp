#include "covforms/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace covforms {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

long long parse_int(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(line, "key '" + key + "' expects an integer, got '" + value + "'");
    }
}

double parse_double(int line, const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(line, "key '" + key + "' expects a number, got '" + value + "'");
    }
}

bool parse_bool(int line, const std::string& key, const std::string& value) {
    if (value == "true") return true;
    if (value == "false") return false;
    fail(line, "key '" + key + "' expects true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::symplectic: return "symplectic";
        case Scenario::kaehler: return "kaehler";
        case Scenario::special_complex: return "special-complex";
        case Scenario::custom: return "custom";
    }
    return "custom";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "symplectic") return Scenario::symplectic;
    if (s == "kaehler") return Scenario::kaehler;
    if (s == "special-complex") return Scenario::special_complex;
    if (s == "custom") return Scenario::custom;
    throw ConfigError("unknown scenario '" + s +
                      "' (expected symplectic, kaehler, special-complex, or custom)");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    bool saw_scenario = false, saw_n = false, saw_sizes = false, saw_spacings = false;
    bool saw_k = false, saw_rank = false;
    std::string section;  // "" = top level

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header '" + line + "'");
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "bundle" && section != "flow")
                fail(lineno, "unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (value.empty()) fail(lineno, "key '" + key + "' has no value");

        if (section.empty()) {
            if (key == "scenario") {
                try {
                    cfg.scenario = scenario_from_string(value);
                } catch (const ConfigError& e) {
                    fail(lineno, e.what());
                }
                saw_scenario = true;
            } else if (key == "seed") {
                long long v = parse_int(lineno, key, value);
                if (v < 0) fail(lineno, "seed must be >= 0");
                cfg.seed = static_cast<std::uint64_t>(v);
            } else if (key == "init") {
                cfg.init = value;
            } else if (key == "out") {
                cfg.out_dir = value;
            } else if (key == "k") {
                long long v = parse_int(lineno, key, value);
                if (v < 0) fail(lineno, "k must be >= 0");
                cfg.k = static_cast<int>(v);
                saw_k = true;
            } else {
                fail(lineno, "unknown key '" + key + "' at top level");
            }
        } else if (section == "grid") {
            if (key == "n") {
                long long v = parse_int(lineno, key, value);
                if (v < 1) fail(lineno, "grid dimension n must be >= 1");
                cfg.n = static_cast<int>(v);
                saw_n = true;
            } else if (key == "sizes") {
                cfg.sizes.clear();
                for (const auto& item : split_list(value)) {
                    long long v = parse_int(lineno, key, item);
                    if (v < 3)
                        fail(lineno, "sizes must all be >= 3 (got " + item +
                                         "); fewer than 3 cells per axis makes wrap-around "
                                         "incidence ambiguous");
                    cfg.sizes.push_back(static_cast<int>(v));
                }
                saw_sizes = true;
            } else if (key == "spacings") {
                cfg.spacings.clear();
                for (const auto& item : split_list(value)) {
                    double v = parse_double(lineno, key, item);
                    if (!(v > 0.0)) fail(lineno, "spacings must all be > 0 (got " + item + ")");
                    cfg.spacings.push_back(v);
                }
                saw_spacings = true;
            } else {
                fail(lineno, "unknown key '" + key + "' in section [grid]");
            }
        } else if (section == "bundle") {
            if (key == "connection") {
                cfg.connection = value;
            } else if (key == "rank") {
                long long v = parse_int(lineno, key, value);
                if (v < 1) fail(lineno, "rank must be >= 1");
                cfg.rank = static_cast<int>(v);
                saw_rank = true;
            } else {
                fail(lineno, "unknown key '" + key + "' in section [bundle]");
            }
        } else if (section == "flow") {
            if (key == "step") {
                if (value != "auto") {
                    double v = parse_double(lineno, key, value);
                    if (!(v > 0.0)) fail(lineno, "step must be positive or auto");
                }
                cfg.step = value;
            } else if (key == "max_steps") {
                long long v = parse_int(lineno, key, value);
                if (v < 0) fail(lineno, "max_steps must be >= 0");
                cfg.max_steps = static_cast<int>(v);
            } else if (key == "project_each_step") {
                cfg.project_each_step = parse_bool(lineno, key, value);
            } else if (key == "renormalize") {
                cfg.renormalize = parse_bool(lineno, key, value);
            } else {
                fail(lineno, "unknown key '" + key + "' in section [flow]");
            }
        }
    }

    if (!saw_scenario) throw ConfigError("config: missing required key 'scenario'");
    if (!saw_n || !saw_sizes || !saw_spacings)
        throw ConfigError("config: section [grid] must set n, sizes, and spacings");
    if (static_cast<int>(cfg.sizes.size()) != cfg.n)
        throw ConfigError("config: sizes must list exactly n values");
    if (static_cast<int>(cfg.spacings.size()) != cfg.n)
        throw ConfigError("config: spacings must list exactly n values");

    switch (cfg.scenario) {
        case Scenario::symplectic: cfg.k = 2; break;
        case Scenario::kaehler: cfg.k = 0; break;
        case Scenario::special_complex: cfg.k = 1; break;
        case Scenario::custom: break;
    }
    if (cfg.scenario != Scenario::custom) {
        if (saw_k)
            throw ConfigError("config: key 'k' is fixed by scenario '" + to_string(cfg.scenario) +
                              "' and may only be set for scenario custom");
        if (saw_rank)
            throw ConfigError("config: key 'rank' is derived from scenario '" +
                              to_string(cfg.scenario) + "' and may only be set for scenario custom");
        if (cfg.n % 2 != 0)
            throw ConfigError("config: scenario '" + to_string(cfg.scenario) +
                              "' requires an even grid dimension");
    } else {
        if (cfg.k > cfg.n) throw ConfigError("config: k must be <= n");
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace covforms
