#pragma once

/// @file bundle.hpp
/// Vector bundle data over a TorusGrid: a rank-m fiber at every vertex with
/// an SPD metric matrix, and an invertible transport matrix on every edge
/// (lattice-gauge style connection).
///
/// The canonical edge (v, axis) runs from v to v + e_axis; transport(e) maps
/// the fiber at the tail to the fiber at the head, and the reverse transport
/// is the stored matrix inverse.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "covforms/grid.hpp"

namespace covforms {

/// Edge of the grid with a traversal direction.
struct OrientedEdge {
    Index vertex;  ///< base vertex of the canonical edge
    int axis;
    bool reverse = false;  ///< true: traverse head -> tail

    Index tail(const TorusGrid& g) const { return reverse ? g.vertex_shift(vertex, axis, 1) : vertex; }
    Index head(const TorusGrid& g) const { return reverse ? vertex : g.vertex_shift(vertex, axis, 1); }
};

class BundleData {
public:
    /// Identity metric and identity transports.
    static BundleData trivial(const TorusGrid& grid, int rank);
    /// Gauge transform of the trivial bundle by seeded random per-vertex
    /// frames; flat by construction, with generically non-identity metric.
    static BundleData pure_gauge(const TorusGrid& grid, int rank, std::uint64_t seed);
    /// Identity metric with random orthogonal transports (Cayley of a random
    /// skew matrix scaled by strength); generically curved.
    static BundleData random_orthogonal(const TorusGrid& grid, int rank, std::uint64_t seed,
                                        double strength);
    /// Identity metric with transports read from a columnar file of rows
    /// "edge_id row col value"; unlisted entries are zero.
    static BundleData from_edge_file(const TorusGrid& grid, int rank, const std::string& path);

    int rank() const { return rank_; }
    Index num_vertices() const { return static_cast<Index>(metric_.size()); }
    int grid_dim() const { return dim_; }

    const Eigen::MatrixXd& metric(Index v) const { return metric_[v]; }
    const Eigen::MatrixXd& transport(Index edge) const { return fwd_[edge]; }
    const Eigen::MatrixXd& transport_inverse(Index edge) const { return bwd_[edge]; }

    /// Solves H_v x = rhs with the cached Cholesky factor.
    Eigen::VectorXd metric_solve(Index v, const Eigen::VectorXd& rhs) const {
        return llt_[v].solve(rhs);
    }

    /// Max over edges of ||U^T H_head U - H_tail||_F.
    double metric_compatibility_residual(const TorusGrid& grid) const;

    /// Construction from explicit data; validates SPD metrics and inverts
    /// transports once.
    BundleData(const TorusGrid& grid, int rank, std::vector<Eigen::MatrixXd> metric,
               std::vector<Eigen::MatrixXd> transport);

    bool matches(const TorusGrid& grid) const;

private:
    int rank_;
    int dim_;
    std::vector<Eigen::MatrixXd> metric_;  // per vertex, SPD
    std::vector<Eigen::LLT<Eigen::MatrixXd>> llt_;
    std::vector<Eigen::MatrixXd> fwd_;  // per canonical edge
    std::vector<Eigen::MatrixXd> bwd_;  // exact stored inverses
};

/// New bundle with U'_e = s_head^{-1} U_e s_tail and H'_v = s_v^T H_v s_v.
/// Rejects frames whose condition number exceeds cond_limit.
BundleData gauge_transform(const TorusGrid& grid, const BundleData& b,
                           const std::vector<Eigen::MatrixXd>& frames, double cond_limit = 1e12);

/// Ordered product U_{e_L} ... U_{e_1} along a consecutive path.
Eigen::MatrixXd transport_path(const TorusGrid& grid, const BundleData& b,
                               const std::vector<OrientedEdge>& path);

/// Transport around the 4-edge loop of a 2-cell, based at its anchor.
Eigen::MatrixXd plaquette_holonomy(const TorusGrid& grid, const BundleData& b, const Cell& c);

/// Endomorphism bundle of rank m^2: fibers are m x m matrices flattened
/// column-major, transports act by conjugation A -> U A U^{-1}. The induced
/// metric is Frobenius (identity on the flattened fiber); the induced metric
/// for a non-identity base metric is not implemented.
BundleData induced_end_bundle(const TorusGrid& grid, const BundleData& b);

struct MorphismReport {
    double naturality_residual = 0.0;
    double isometry_residual = 0.0;
    bool inclusion_ok = true;
};

class Cochain;

/// Checks a candidate bundle morphism sigma (one m_F x m_E matrix per vertex)
/// between bundles over the same grid:
///   naturality_residual = max over edges of ||sigma_head U^E_e - U^F_e sigma_tail||_F
///   isometry_residual   = max over vertices of ||sigma_v^T H^F_v sigma_v - H^E_v||_F
///   inclusion_ok        = every sample satisfying u_pred maps under
///                         (Id (x) sigma) to a cochain satisfying v_pred.
MorphismReport check_morphism(const TorusGrid& grid, const std::vector<Eigen::MatrixXd>& sigma,
                              const BundleData& bE, const BundleData& bF,
                              const std::function<bool(const Cochain&)>& u_pred,
                              const std::function<bool(const Cochain&)>& v_pred,
                              const std::vector<Cochain>& samples);

}  // namespace covforms
