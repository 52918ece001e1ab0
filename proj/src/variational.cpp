#include "covforms/variational.hpp"

#include <cmath>
#include <stdexcept>

namespace covforms {

namespace {

bool component_is_zero(const GradedCochain& g, int k) {
    if (!g.has(k)) return true;
    return g.at(k).values().cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

bool tilde_membership(const TildeDomain& dom, const TorusGrid& grid, const BundleData& b,
                      const GradedCochain& g) {
    int k = dom.k;
    if (k - 2 >= 0 && !component_is_zero(g, k - 2)) return false;
    if (k + 2 <= grid.dim() && g.has(k + 2)) {
        // A degree-(k+2) part at rounding scale relative to the whole state
        // counts as zero; the relative test is meaningless there.
        double n2 = norm(grid, b, g.at(k + 2));
        if (n2 > 1e-12 * norm(grid, b, g)) {
            double r = norm(grid, b, delta_cov(grid, b, g.at(k + 2)));
            if (r > dom.tolerance * n2) return false;
        }
    }
    return true;
}

GradedCochain project_tilde(const TildeDomain& dom, const TorusGrid& grid, const BundleData& b,
                            const GradedCochain& g, ProjectionStats* stats) {
    int k = dom.k;
    GradedCochain out = g;
    if (stats) *stats = ProjectionStats{};
    if (k - 2 >= 0 && out.has(k - 2)) out.clear(k - 2);
    if (k + 2 > grid.dim() || !out.has(k + 2)) return out;

    const Cochain& top = out.at(k + 2);
    Cochain rhs = delta_cov(grid, b, top);  // degree k+1
    double rhs_norm = norm(grid, b, rhs);
    if (rhs_norm == 0.0) return out;

    // CG on the weighted-self-adjoint PSD operator delta(d(.)) at degree k+1.
    // The system is consistent: delta gamma is orthogonal to ker(d).
    Index ncells = grid.num_cells(k + 1);
    int max_iters = static_cast<int>(10 * ncells);
    double tol = 1e-10;

    Cochain eta(grid, b.rank(), k + 1);
    Cochain r = rhs;
    Cochain p = r;
    double rs = inner(grid, b, r, r);
    int it = 0;
    for (; it < max_iters; ++it) {
        if (std::sqrt(rs) <= tol * rhs_norm) break;
        Cochain ap = delta_cov(grid, b, d_cov(grid, b, p));
        double p_ap = inner(grid, b, p, ap);
        if (p_ap <= 0.0) break;  // p fell into the kernel
        double alpha = rs / p_ap;
        eta.values() += alpha * p.values();
        r.values() -= alpha * ap.values();
        double rs_next = inner(grid, b, r, r);
        p.values() = r.values() + (rs_next / rs) * p.values();
        rs = rs_next;
    }
    double achieved = std::sqrt(rs) / rhs_norm;
    if (stats) {
        stats->cg_iterations = it;
        stats->cg_residual = achieved;
        stats->cg_converged = achieved <= tol;
    }
    if (achieved > tol && !stats)
        throw std::runtime_error("project_tilde: CG stalled at relative residual " +
                                 std::to_string(achieved));

    Cochain corrected = top;
    corrected -= d_cov(grid, b, eta);
    // A component that collapses to rounding scale has trivial coclosed
    // part; snap it to the exact projection.
    if (norm(grid, b, corrected) <= 1e-12 * norm(grid, b, top)) corrected.values().setZero();
    out.set(std::move(corrected));
    return out;
}

double functional_F(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g) {
    return inner(grid, b, masked_d(k, grid, b, g), g);
}

GradedCochain gradient_F(int k, const TorusGrid& grid, const BundleData& b,
                         const GradedCochain& g) {
    GradedCochain grad = masked_d(k, grid, b, g);
    grad.axpy(1.0, masked_delta(k, grid, b, g), grid, b);
    return grad;
}

Eigen::VectorXd critical_residual(int k, const TorusGrid& grid, const BundleData& b,
                                  const GradedCochain& g) {
    GradedCochain grad = gradient_F(k, grid, b, g);
    Eigen::VectorXd res = Eigen::VectorXd::Zero(grid.dim() + 1);
    for (int l = 0; l <= grid.dim(); ++l)
        if (grad.has(l)) res(l) = norm(grid, b, grad.at(l));
    return res;
}

Cochain extract_pk(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g) {
    if (g.has(k)) return g.at(k);
    return Cochain(grid, b.rank(), k);
}

double estimate_operator_norm(int k, const TorusGrid& grid, const BundleData& b,
                              std::uint64_t seed, int iterations) {
    GradedCochain x = random_graded_cochain(grid, b, seed, 1.0);
    double nx = norm(grid, b, x);
    if (nx == 0.0) return 0.0;
    x *= 1.0 / nx;
    double estimate = 0.0;
    for (int it = 0; it < iterations; ++it) {
        GradedCochain y = gradient_F(k, grid, b, x);
        double ny = norm(grid, b, y);
        if (ny == 0.0) return 0.0;
        estimate = ny;
        y *= 1.0 / ny;
        x = std::move(y);
    }
    return estimate;
}

FlowResult run_flow(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g0,
                    const FlowParams& params) {
    FlowResult result;
    result.state = g0;

    if (params.step && !(*params.step > 0.0))
        throw std::invalid_argument("run_flow: step must be positive");
    if (params.step) {
        result.step_used = *params.step;
    } else {
        result.operator_norm_estimate =
            estimate_operator_norm(k, grid, b, params.power_seed, params.power_iterations);
        result.step_used =
            result.operator_norm_estimate > 0.0 ? 0.9 / result.operator_norm_estimate : 1.0;
    }
    double tau = result.step_used;

    TildeDomain dom{k, 1e-8};
    if (params.project_each_step) result.state = project_tilde(dom, grid, b, result.state);
    if (params.structure_projector) params.structure_projector(result.state);

    double initial_norm = norm(grid, b, result.state);

    auto record = [&](int step) {
        result.trace.times.push_back(step * tau);
        result.trace.F_values.push_back(functional_F(k, grid, b, result.state));
        Eigen::VectorXd res = critical_residual(k, grid, b, result.state);
        result.trace.gradient_norms.push_back(res.norm());
        result.trace.residual_by_degree.push_back(std::move(res));
    };

    record(0);
    result.status = FlowStatus::max_steps;
    if (result.trace.gradient_norms.back() <= params.grad_tol) {
        result.status = FlowStatus::converged;
        return result;
    }

    for (int step = 1; step <= params.max_steps; ++step) {
        GradedCochain grad = gradient_F(k, grid, b, result.state);
        result.state.axpy(-tau, grad, grid, b);
        if (params.project_each_step) result.state = project_tilde(dom, grid, b, result.state);
        if (params.structure_projector) params.structure_projector(result.state);
        if (params.renormalize) {
            double n = norm(grid, b, result.state);
            if (n > 0.0) result.state *= initial_norm / n;
        }
        result.steps_taken = step;
        record(step);

        if (norm(grid, b, result.state) > params.divergence_factor * initial_norm) {
            result.status = FlowStatus::diverged;
            return result;
        }
        if (result.trace.gradient_norms.back() <= params.grad_tol) {
            result.status = FlowStatus::converged;
            return result;
        }
    }
    return result;
}

}  // namespace covforms
