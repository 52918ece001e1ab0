#pragma once

/// @file structures.hpp
/// Pointwise structure fields and the constraint-set checks: non-degenerate
/// 2-forms, g-orthogonal anti-involutions (almost-complex structures), the
/// covariant-constancy residuals that detect Kaehler and special complex
/// structures, and a finite-difference integrability (Nijenhuis) residual.

#include <Eigen/Dense>
#include <vector>

#include "covforms/bundle.hpp"
#include "covforms/cochain.hpp"
#include "covforms/grid.hpp"

namespace covforms {

/// Per-vertex antisymmetric n x n matrix, stored as the strict upper
/// triangle in row-major pair order (0,1), (0,2), ..., (n-2,n-1).
class TwoFormField {
public:
    TwoFormField(int n, Index num_vertices)
        : n_(n), upper_(num_vertices, Eigen::VectorXd::Zero(n * (n - 1) / 2)) {}

    int dim() const { return n_; }
    Index num_vertices() const { return static_cast<Index>(upper_.size()); }

    double entry(Index v, int i, int j) const;
    void set_entry(Index v, int i, int j, double value);  ///< requires i < j
    Eigen::MatrixXd matrix(Index v) const;                ///< antisymmetric completion

    const Eigen::VectorXd& upper(Index v) const { return upper_[v]; }
    Eigen::VectorXd& upper(Index v) { return upper_[v]; }

private:
    int pair_index(int i, int j) const;
    int n_;
    std::vector<Eigen::VectorXd> upper_;
};

/// Per-vertex n x n matrix field (candidate almost-complex structure).
struct JField {
    std::vector<Eigen::MatrixXd> values;

    Index num_vertices() const { return static_cast<Index>(values.size()); }
    int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
};

/// Vertex-averaged pointwise coefficients of a scalar 2-cochain:
/// omega_ij(v) = mean of the 4 incident (i,j)-plaquette values / (h_i h_j).
TwoFormField reconstruct_two_form(const TorusGrid& grid, const Cochain& omega);

struct NondegenerateReport {
    bool ok = false;
    double min_abs_det = 0.0;
};

/// ok iff min over vertices of |det omega(v)| >= eps.
NondegenerateReport check_nondegenerate(const TwoFormField& field, double eps);

struct AcReport {
    double ac_residual = 0.0;    ///< max_v ||J(v)^2 + I||_F
    double orth_residual = 0.0;  ///< max_v ||J(v)^T G(v) J(v) - G(v)||_F
};

AcReport check_ac_orthogonal(const JField& j, const std::vector<Eigen::MatrixXd>& g);
AcReport check_ac_orthogonal(const JField& j, const Eigen::MatrixXd& g);

/// Nearest g-orthogonal anti-involution, per vertex: conjugate to the g = I
/// frame, take the orthogonal polar factor of the skew part, conjugate back.
/// Throws when the skew part is singular at some vertex.
JField project_ac_g(const JField& field, const std::vector<Eigen::MatrixXd>& g);
JField project_ac_g(const JField& field, const Eigen::MatrixXd& g);

/// ||d J||, with J embedded as a 0-cochain in the endomorphism bundle induced
/// from the supplied tangent-bundle data.
double kaehler_residual(const TorusGrid& grid, const BundleData& tangent, const JField& j);

/// ||d J||, with J embedded as a tangent-valued 1-cochain (edge value along
/// axis i is h_i J(anchor) e_i, the edge integral of the 1-form).
double special_complex_residual(const TorusGrid& grid, const BundleData& tangent, const JField& j);

/// Finite-difference Nijenhuis tensor: max over vertices and coordinate
/// pairs (e_i, e_j), i < j, of ||N_J(e_i, e_j)||_2 with central differences
/// for the derivatives of J and frozen coordinate fields.
double nijenhuis_residual(const TorusGrid& grid, const JField& j);

/// Embeddings used by the flow scenarios.
Cochain to_end_cochain(const TorusGrid& grid, const JField& j);               // degree 0, rank n^2
JField from_end_cochain(const TorusGrid& grid, const Cochain& c);             // inverse
Cochain to_tangent_cochain(const TorusGrid& grid, const JField& j);           // degree 1, rank n
JField from_tangent_cochain(const TorusGrid& grid, const Cochain& c);         // inverse

/// Block-diagonal rotation by 90 degrees in the (2i, 2i+1) planes; the
/// standard constant complex structure (n must be even).
Eigen::MatrixXd standard_complex_structure(int n);

}  // namespace covforms
