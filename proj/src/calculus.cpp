#include "covforms/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace covforms {

namespace {

void require_match(const TorusGrid& grid, const BundleData& b, const Cochain& c,
                   const char* where) {
    if (!b.matches(grid) || !c.matches(grid, b))
        throw std::invalid_argument(std::string(where) + ": grid/bundle/cochain mismatch");
}

}  // namespace

double hodge_weight(const TorusGrid& grid, const Cell& c) {
    grid.validate_cell(c);
    return grid.dual_volume(c) / grid.primal_volume(c);
}

double cell_mass(const TorusGrid& grid, const Cell& c) {
    return grid.primal_volume(c) * hodge_weight(grid, c);
}

double inner(const TorusGrid& grid, const BundleData& b, const Cochain& a, const Cochain& c) {
    require_match(grid, b, a, "inner");
    require_match(grid, b, c, "inner");
    if (a.degree() != c.degree()) throw std::invalid_argument("inner: degree mismatch");
    int k = a.degree();
    double sum = 0.0;
    for (Index id = 0; id < a.num_cells(); ++id) {
        Cell cell = grid.cell(k, id);
        double mass = cell_mass(grid, cell);
        Index anchor = grid.anchor_vertex(cell);
        sum += mass * a.value(id).dot(b.metric(anchor) * c.value(id));
    }
    return sum;
}

double inner(const TorusGrid& grid, const BundleData& b, const GradedCochain& a,
             const GradedCochain& c) {
    double sum = 0.0;
    for (int k = 0; k <= grid.dim(); ++k)
        if (a.has(k) && c.has(k)) sum += inner(grid, b, a.at(k), c.at(k));
    return sum;
}

double norm(const TorusGrid& grid, const BundleData& b, const Cochain& a) {
    return std::sqrt(std::max(0.0, inner(grid, b, a, a)));
}

double norm(const TorusGrid& grid, const BundleData& b, const GradedCochain& a) {
    return std::sqrt(std::max(0.0, inner(grid, b, a, a)));
}

Cochain d_cov(const TorusGrid& grid, const BundleData& b, const Cochain& alpha) {
    require_match(grid, b, alpha, "d_cov");
    int k = alpha.degree();
    if (k >= grid.dim())
        throw std::invalid_argument("d_cov: no degree n+1 cochains on an n-torus");
    Cochain out(grid, b.rank(), k + 1);
    for (Index id = 0; id < out.num_cells(); ++id) {
        Cell c = grid.cell(k + 1, id);
        Index anchor = grid.anchor_vertex(c);
        auto acc = out.value(id);
        for (const auto& f : grid.boundary_faces(c)) {
            Index fid = grid.cell_id(f.cell);
            if (f.far) {
                // Pull the far-face value back along the omitted axis.
                Index e = grid.edge_id(anchor, f.axis);
                acc += static_cast<double>(f.sign) * (b.transport_inverse(e) * alpha.value(fid));
            } else {
                acc += static_cast<double>(f.sign) * alpha.value(fid);
            }
        }
    }
    return out;
}

Cochain delta_cov(const TorusGrid& grid, const BundleData& b, const Cochain& beta) {
    require_match(grid, b, beta, "delta_cov");
    int k = beta.degree();
    if (k <= 0) throw std::invalid_argument("delta_cov: no degree -1 cochains");
    Cochain out(grid, b.rank(), k - 1);
    // Scatter: <d a, beta> = sum_c mass(c) sum_f sign (P a(f))^T H_c beta(c),
    // so the accumulator at f is sign * mass(c) * P^T H_c beta(c).
    for (Index id = 0; id < beta.num_cells(); ++id) {
        Cell c = grid.cell(k, id);
        double mass = cell_mass(grid, c);
        Index anchor = grid.anchor_vertex(c);
        Eigen::VectorXd weighted = mass * (b.metric(anchor) * beta.value(id));
        for (const auto& f : grid.boundary_faces(c)) {
            Index fid = grid.cell_id(f.cell);
            if (f.far) {
                Index e = grid.edge_id(anchor, f.axis);
                out.value(fid) +=
                    static_cast<double>(f.sign) * (b.transport_inverse(e).transpose() * weighted);
            } else {
                out.value(fid) += static_cast<double>(f.sign) * weighted;
            }
        }
    }
    // Undo the face-side mass and metric.
    for (Index fid = 0; fid < out.num_cells(); ++fid) {
        Cell f = grid.cell(k - 1, fid);
        Index anchor = grid.anchor_vertex(f);
        out.value(fid) = b.metric_solve(anchor, out.value(fid)) / cell_mass(grid, f);
    }
    return out;
}

GradedCochain masked_d(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g) {
    if (k < 0 || k > grid.dim()) throw std::invalid_argument("masked_d: k out of range");
    GradedCochain out(grid.dim());
    for (int i = 0; i < grid.dim(); ++i) {
        if (i == k - 1 || !g.has(i)) continue;
        out.set(d_cov(grid, b, g.at(i)));
    }
    return out;
}

GradedCochain masked_delta(int k, const TorusGrid& grid, const BundleData& b,
                           const GradedCochain& g) {
    if (k < 0 || k > grid.dim()) throw std::invalid_argument("masked_delta: k out of range");
    GradedCochain out(grid.dim());
    for (int i = 1; i <= grid.dim(); ++i) {
        if (i == k || !g.has(i)) continue;
        out.set(delta_cov(grid, b, g.at(i)));
    }
    return out;
}

Cochain curvature_action(const TorusGrid& grid, const BundleData& b, const Cochain& alpha) {
    if (alpha.degree() > grid.dim() - 2)
        throw std::invalid_argument("curvature_action: degree must be <= n-2");
    return d_cov(grid, b, d_cov(grid, b, alpha));
}

}  // namespace covforms
