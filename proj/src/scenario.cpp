#include "covforms/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "covforms/calculus.hpp"
#include "covforms/io.hpp"
#include "covforms/rng.hpp"
#include "covforms/structures.hpp"
#include "covforms/version.hpp"

namespace covforms {

namespace {

std::vector<std::string> split(const std::string& s, char sep, std::size_t max_parts) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (parts.size() + 1 < max_parts) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) break;
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    parts.push_back(s.substr(start));
    return parts;
}

std::uint64_t parse_seed_part(const std::string& spec, const std::string& part) {
    try {
        return static_cast<std::uint64_t>(std::stoull(part));
    } catch (...) {
        throw ConfigError("malformed connection spec '" + spec + "': bad seed '" + part + "'");
    }
}

Cochain constant_cochain(const TorusGrid& grid, const BundleData& b, int degree,
                         std::uint64_t seed) {
    // One seeded fiber vector per axis family, repeated over all its cells;
    // closed whenever the transports are trivial.
    Rng rng(seed);
    Cochain c(grid, b.rank(), degree);
    for (int r = 0; r < grid.num_axis_sets(degree); ++r) {
        Eigen::VectorXd w(b.rank());
        for (int i = 0; i < b.rank(); ++i) w(i) = rng.symmetric(1.0);
        for (Index v = 0; v < grid.num_vertices(); ++v)
            c.value(static_cast<Index>(r) * grid.num_vertices() + v) = w;
    }
    return c;
}

std::string status_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::converged: return "converged";
        case FlowStatus::max_steps: return "max_steps";
        case FlowStatus::diverged: return "diverged";
    }
    return "max_steps";
}

nlohmann::json config_echo(const ScenarioConfig& cfg) {
    return nlohmann::json{{"scenario", to_string(cfg.scenario)},
                          {"n", cfg.n},
                          {"sizes", cfg.sizes},
                          {"spacings", cfg.spacings},
                          {"connection", cfg.connection},
                          {"rank", cfg.rank},
                          {"k", cfg.k},
                          {"seed", cfg.seed},
                          {"init", cfg.init},
                          {"out", cfg.out_dir},
                          {"step", cfg.step},
                          {"max_steps", cfg.max_steps},
                          {"project_each_step", cfg.project_each_step},
                          {"renormalize", cfg.renormalize}};
}

}  // namespace

BundleData make_bundle_from_spec(const TorusGrid& grid, int rank, const std::string& spec,
                                 std::uint64_t base_seed) {
    if (spec == "trivial") return BundleData::trivial(grid, rank);
    auto parts = split(spec, ':', 3);
    if (parts[0] == "pure-gauge") {
        if (parts.size() != 2)
            throw ConfigError("malformed connection spec '" + spec + "': expected pure-gauge:<seed>");
        return BundleData::pure_gauge(grid, rank, base_seed + parse_seed_part(spec, parts[1]));
    }
    if (parts[0] == "random-orthogonal") {
        if (parts.size() != 3)
            throw ConfigError("malformed connection spec '" + spec +
                              "': expected random-orthogonal:<seed>:<strength>");
        double strength;
        try {
            strength = std::stod(parts[2]);
        } catch (...) {
            throw ConfigError("malformed connection spec '" + spec + "': bad strength");
        }
        return BundleData::random_orthogonal(grid, rank,
                                             base_seed + parse_seed_part(spec, parts[1]), strength);
    }
    if (parts[0] == "file") {
        if (parts.size() < 2) throw ConfigError("malformed connection spec '" + spec + "'");
        std::string path = spec.substr(5);
        return BundleData::from_edge_file(grid, rank, path);
    }
    throw ConfigError("unknown connection spec '" + spec + "'");
}

Cochain standard_symplectic_cochain(const TorusGrid& grid) {
    if (grid.dim() % 2 != 0)
        throw std::invalid_argument("standard_symplectic_cochain: dimension must be even");
    Cochain c(grid, 1, 2);
    for (int i = 0; i + 1 < grid.dim(); i += 2) {
        int rank = grid.axis_set_rank({i, i + 1});
        double value = grid.spacing(i) * grid.spacing(i + 1);
        for (Index v = 0; v < grid.num_vertices(); ++v)
            c.values()(0, static_cast<Index>(rank) * grid.num_vertices() + v) = value;
    }
    return c;
}

ScenarioSetup build_scenario(const ScenarioConfig& cfg) {
    TorusGrid grid(cfg.n, cfg.sizes, cfg.spacings);
    int n = grid.dim();

    std::optional<BundleData> tangent;
    std::optional<BundleData> bundle;
    int k = cfg.k;
    switch (cfg.scenario) {
        case Scenario::symplectic:
            bundle = make_bundle_from_spec(grid, 1, cfg.connection, cfg.seed);
            break;
        case Scenario::kaehler:
            tangent = make_bundle_from_spec(grid, n, cfg.connection, cfg.seed);
            bundle = induced_end_bundle(grid, *tangent);
            break;
        case Scenario::special_complex:
            tangent = make_bundle_from_spec(grid, n, cfg.connection, cfg.seed);
            bundle = *tangent;
            break;
        case Scenario::custom:
            bundle = make_bundle_from_spec(grid, cfg.rank, cfg.connection, cfg.seed);
            break;
    }

    // Initial state.
    GradedCochain init(n);
    auto closed_component = [&]() -> Cochain {
        switch (cfg.scenario) {
            case Scenario::symplectic: return standard_symplectic_cochain(grid);
            case Scenario::kaehler: {
                JField j;
                j.values.assign(grid.num_vertices(), standard_complex_structure(n));
                return to_end_cochain(grid, j);
            }
            case Scenario::special_complex: {
                JField j;
                j.values.assign(grid.num_vertices(), standard_complex_structure(n));
                return to_tangent_cochain(grid, j);
            }
            case Scenario::custom: return constant_cochain(grid, *bundle, k, cfg.seed + 17);
        }
        throw ConfigError("unreachable");
    };

    auto parts = split(cfg.init, ':', 2);
    if (parts[0] == "closed") {
        if (parts.size() != 1) throw ConfigError("init 'closed' takes no argument");
        init.set(closed_component());
    } else if (parts[0] == "perturbed-closed") {
        if (parts.size() != 2)
            throw ConfigError("init 'perturbed-closed' expects perturbed-closed:<amplitude>");
        double amp;
        try {
            amp = std::stod(parts[1]);
        } catch (...) {
            throw ConfigError("init 'perturbed-closed': bad amplitude '" + parts[1] + "'");
        }
        if (k >= n)
            throw ConfigError("init 'perturbed-closed' needs k < n for a degree k+1 perturbation");
        init.set(closed_component());
        Cochain eta = random_cochain(grid, *bundle, k, cfg.seed + 101, amp);
        init.set(d_cov(grid, *bundle, eta));
    } else if (parts[0] == "random") {
        if (parts.size() != 2) throw ConfigError("init 'random' expects random:<amplitude>");
        double amp;
        try {
            amp = std::stod(parts[1]);
        } catch (...) {
            throw ConfigError("init 'random': bad amplitude '" + parts[1] + "'");
        }
        init = random_graded_cochain(grid, *bundle, cfg.seed + 202, amp);
    } else if (parts[0] == "file") {
        if (parts.size() != 2) throw ConfigError("init 'file' expects file:<path>");
        std::ifstream in(parts[1]);
        if (!in) throw ConfigError("cannot open init file: " + parts[1]);
        init = read_graded_cochain(in, grid, bundle->rank());
    } else {
        throw ConfigError("unknown init '" + cfg.init +
                          "' (expected closed, perturbed-closed:<amp>, random:<amp>, file:<path>)");
    }

    // Retraction onto the structure set, used when the flow projects.
    std::function<void(GradedCochain&)> projector;
    if (cfg.scenario == Scenario::kaehler) {
        TorusGrid g2 = grid;
        projector = [g2](GradedCochain& g) {
            if (!g.has(0)) return;
            JField j = from_end_cochain(g2, g.at(0));
            g.set(to_end_cochain(g2, project_ac_g(j, Eigen::MatrixXd::Identity(g2.dim(), g2.dim()))));
        };
    } else if (cfg.scenario == Scenario::special_complex) {
        TorusGrid g2 = grid;
        projector = [g2](GradedCochain& g) {
            if (!g.has(1)) return;
            JField j = from_tangent_cochain(g2, g.at(1));
            g.set(to_tangent_cochain(g2,
                                     project_ac_g(j, Eigen::MatrixXd::Identity(g2.dim(), g2.dim()))));
        };
    }

    return ScenarioSetup{std::move(grid), std::move(*bundle), std::move(tangent), k,
                         std::move(init), std::move(projector)};
}

nlohmann::json structure_report(const ScenarioSetup& setup, const GradedCochain& state) {
    const TorusGrid& grid = setup.grid;
    nlohmann::json out;
    Cochain pk = extract_pk(setup.k, grid, setup.bundle, state);
    if (setup.k < grid.dim())
        out["closedness_residual"] = norm(grid, setup.bundle, d_cov(grid, setup.bundle, pk));
    else
        out["closedness_residual"] = 0.0;

    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(grid.dim(), grid.dim());

    if (!setup.tangent && setup.k == 2 && setup.bundle.rank() == 1 && grid.dim() >= 2) {
        TwoFormField field = reconstruct_two_form(grid, pk);
        NondegenerateReport r = check_nondegenerate(field, 1e-6);
        out["min_abs_det"] = r.min_abs_det;
        out["nondegenerate"] = r.ok;
    } else if (setup.tangent && setup.k == 0) {
        JField j = from_end_cochain(grid, pk);
        AcReport ac = check_ac_orthogonal(j, id);
        out["ac_residual"] = ac.ac_residual;
        out["orth_residual"] = ac.orth_residual;
        out["kaehler_residual"] = kaehler_residual(grid, *setup.tangent, j);
    } else if (setup.tangent && setup.k == 1) {
        JField j = from_tangent_cochain(grid, pk);
        AcReport ac = check_ac_orthogonal(j, id);
        out["ac_residual"] = ac.ac_residual;
        out["orth_residual"] = ac.orth_residual;
        out["special_complex_residual"] = special_complex_residual(grid, *setup.tangent, j);
        out["nijenhuis_residual"] = nijenhuis_residual(grid, j);
    }
    return out;
}

int run_scenario(const ScenarioConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    ScenarioSetup setup = build_scenario(cfg);

    FlowParams params;
    if (cfg.step != "auto") params.step = std::stod(cfg.step);
    params.max_steps = cfg.max_steps;
    params.renormalize = cfg.renormalize;
    params.project_each_step = cfg.project_each_step;
    if (cfg.project_each_step) params.structure_projector = setup.structure_projector;
    params.power_seed = cfg.seed + 7919;

    FlowResult result = run_flow(setup.k, setup.grid, setup.bundle, setup.init, params);

    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + cfg.out_dir);

    {
        std::ofstream trace(dir / "trace.csv");
        write_trace_csv(trace, result.trace, setup.grid.dim());
        if (!trace) throw ConfigError("cannot write " + (dir / "trace.csv").string());
    }
    {
        std::ofstream state(dir / "state.cochain");
        write_graded_cochain(state, result.state);
        if (!state) throw ConfigError("cannot write " + (dir / "state.cochain").string());
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    nlohmann::json summary;
    summary["config"] = config_echo(cfg);
    summary["critical"] = result.trace.gradient_norms.back() <= 1e-8;
    summary["final_F"] = result.trace.F_values.back();
    summary["final_gradient_norm"] = result.trace.gradient_norms.back();
    std::vector<double> res(result.trace.residual_by_degree.back().data(),
                            result.trace.residual_by_degree.back().data() +
                                result.trace.residual_by_degree.back().size());
    summary["residual_by_degree"] = res;
    summary["status"] = status_string(result.status);
    summary["steps"] = result.steps_taken;
    summary["step_used"] = result.step_used;
    summary["operator_norm_estimate"] = result.operator_norm_estimate;
    summary["structure"] = structure_report(setup, result.state);
    summary["version"] = kVersion;
    summary["wall_time_seconds"] = wall;
    {
        std::ofstream out(dir / "summary.json");
        out << summary.dump(2) << '\n';
        if (!out) throw ConfigError("cannot write " + (dir / "summary.json").string());
    }

    return result.status == FlowStatus::diverged ? 2 : 0;
}

nlohmann::json check_scenario(const ScenarioConfig& cfg) {
    ScenarioSetup setup = build_scenario(cfg);
    nlohmann::json out;
    out["config"] = config_echo(cfg);
    out["k"] = setup.k;
    out["structure"] = structure_report(setup, setup.init);
    Eigen::VectorXd res = critical_residual(setup.k, setup.grid, setup.bundle, setup.init);
    out["gradient_norm"] = res.norm();
    out["residual_by_degree"] = std::vector<double>(res.data(), res.data() + res.size());
    out["version"] = kVersion;
    return out;
}

nlohmann::json spectrum_scenario(const ScenarioConfig& cfg) {
    ScenarioSetup setup = build_scenario(cfg);
    double est = estimate_operator_norm(setup.k, setup.grid, setup.bundle, cfg.seed + 7919, 50);
    nlohmann::json out;
    out["k"] = setup.k;
    out["operator_norm_estimate"] = est;
    out["power_iterations"] = 50;
    out["seed"] = cfg.seed;
    out["suggested_step"] = est > 0.0 ? 0.9 / est : 1.0;
    out["version"] = kVersion;
    return out;
}

}  // namespace covforms
