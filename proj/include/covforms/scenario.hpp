#pragma once

/// @file scenario.hpp
/// Config-driven batch runner. A scenario fixes the bundle, the target
/// degree k, and the structure checks:
///   symplectic      -> scalar bundle, k = 2, non-degenerate 2-forms
///   kaehler         -> endomorphism bundle of the tangent data, k = 0,
///                      g-orthogonal anti-involutions
///   special-complex -> tangent bundle, k = 1, complex structures
///   custom          -> rank and k from the config
/// The connection string configures the underlying transports
/// ("trivial", "pure-gauge:<seed>", "random-orthogonal:<seed>:<strength>",
/// "file:<path>").

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "covforms/bundle.hpp"
#include "covforms/cochain.hpp"
#include "covforms/config.hpp"
#include "covforms/grid.hpp"
#include "covforms/variational.hpp"

namespace covforms {

/// Materialized scenario state.
struct ScenarioSetup {
    TorusGrid grid;
    BundleData bundle;                   ///< the bundle the flow runs on
    std::optional<BundleData> tangent;   ///< underlying tangent data (kaehler, special-complex)
    int k = 0;
    GradedCochain init;
    std::function<void(GradedCochain&)> structure_projector;  ///< retraction onto U, may be empty
};

BundleData make_bundle_from_spec(const TorusGrid& grid, int rank, const std::string& spec,
                                 std::uint64_t base_seed);

/// Integral of the standard symplectic form: h_i h_j on every plaquette in
/// the (2i, 2i+1) axis planes, zero elsewhere.
Cochain standard_symplectic_cochain(const TorusGrid& grid);

ScenarioSetup build_scenario(const ScenarioConfig& cfg);

/// Structure checks of a state's degree-k component, as reported in
/// summary.json.
nlohmann::json structure_report(const ScenarioSetup& setup, const GradedCochain& state);

/// Runs the flow and writes trace.csv, summary.json, and state.cochain into
/// the output directory. Returns 0 on clean termination and 2 on detected
/// divergence (the partial trace is still written). Configuration problems
/// throw ConfigError.
int run_scenario(const ScenarioConfig& cfg);

/// Structure checks of the initial state only; no flow.
nlohmann::json check_scenario(const ScenarioConfig& cfg);

/// Power-iteration estimate of the operator norm of d[k] + delta[k].
nlohmann::json spectrum_scenario(const ScenarioConfig& cfg);

}  // namespace covforms
