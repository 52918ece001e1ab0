#pragma once

/// @file variational.hpp
/// The variational core: the constrained domain of graded cochains with
/// vanishing degree-(k-2) part and coclosed degree-(k+2) part, the quadratic
/// functional F(gamma) = <<d[k] gamma, gamma>>, its gradient
/// (d[k] + delta[k]) gamma, the per-degree critical residuals, the degree-k
/// extraction, and the explicit-Euler gradient flow.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "covforms/bundle.hpp"
#include "covforms/calculus.hpp"
#include "covforms/cochain.hpp"
#include "covforms/grid.hpp"

namespace covforms {

/// Constrained domain: gamma_{k-2} = 0 and delta gamma_{k+2} = 0 (relative
/// tolerance on the coclosedness of the degree-(k+2) part).
struct TildeDomain {
    int k = 0;
    double tolerance = 1e-8;
};

bool tilde_membership(const TildeDomain& dom, const TorusGrid& grid, const BundleData& b,
                      const GradedCochain& g);

struct ProjectionStats {
    bool cg_converged = true;
    double cg_residual = 0.0;  ///< relative residual achieved
    int cg_iterations = 0;
};

/// Projects onto the constrained domain: zeroes degree k-2 and replaces
/// gamma_{k+2} by gamma_{k+2} - d eta, where (delta d) eta = delta gamma_{k+2}
/// is solved by conjugate gradients in the weighted inner product at degree
/// k+1 (relative residual 1e-10, at most 10 * #cells(k+1) iterations).
GradedCochain project_tilde(const TildeDomain& dom, const TorusGrid& grid, const BundleData& b,
                            const GradedCochain& g, ProjectionStats* stats = nullptr);

/// F(gamma) = <<d[k] gamma, gamma>>.
double functional_F(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g);

/// Gradient of F: (d[k] + delta[k]) gamma.
GradedCochain gradient_F(int k, const TorusGrid& grid, const BundleData& b,
                         const GradedCochain& g);

/// Per-degree L2 norms of the gradient; entry l is the norm of the degree-l
/// component of (d[k] + delta[k]) gamma. For gamma in the constrained domain
/// the entry at l = k-1 is exactly zero.
Eigen::VectorXd critical_residual(int k, const TorusGrid& grid, const BundleData& b,
                                  const GradedCochain& g);

/// Degree-k component (zero cochain when absent).
Cochain extract_pk(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g);

/// Operator norm of (d[k] + delta[k]) estimated by power iteration from a
/// seeded random graded cochain.
double estimate_operator_norm(int k, const TorusGrid& grid, const BundleData& b,
                              std::uint64_t seed, int iterations = 50);

struct FlowTrace {
    std::vector<double> times;
    std::vector<double> F_values;
    std::vector<double> gradient_norms;
    std::vector<Eigen::VectorXd> residual_by_degree;

    std::size_t size() const { return times.size(); }
};

enum class FlowStatus { converged, max_steps, diverged };

struct FlowParams {
    std::optional<double> step;  ///< absent: auto, 0.9 / estimated operator norm
    int max_steps = 2000;
    bool renormalize = false;        ///< rescale to the initial norm each step
    bool project_each_step = false;  ///< re-project onto the constrained domain
    std::function<void(GradedCochain&)> structure_projector;  ///< optional retraction onto U
    double grad_tol = 1e-10;
    double divergence_factor = 1e6;
    std::uint64_t power_seed = 2477;  ///< seed for the auto-step estimate
    int power_iterations = 50;
};

struct FlowResult {
    GradedCochain state;
    FlowTrace trace;
    FlowStatus status = FlowStatus::max_steps;
    double step_used = 0.0;
    double operator_norm_estimate = 0.0;
    int steps_taken = 0;
};

/// Explicit Euler integration of the formal gradient flow
/// d gamma / dt = -(d[k] + delta[k]) gamma.
///
/// When project_each_step is set the initial state is projected before the
/// first record so the flow starts inside the constrained domain. The flow
/// stops when the gradient norm falls below grad_tol, after max_steps, or
/// when ||gamma|| exceeds divergence_factor * ||gamma_0|| (the operator is
/// indefinite, so divergence is a reportable outcome rather than a bug).
FlowResult run_flow(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g0,
                    const FlowParams& params);

}  // namespace covforms
