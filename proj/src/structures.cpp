#include "covforms/structures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covforms/calculus.hpp"

namespace covforms {

int TwoFormField::pair_index(int i, int j) const {
    // row-major strict upper triangle: (0,1) ... (0,n-1), (1,2) ...
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double TwoFormField::entry(Index v, int i, int j) const {
    if (i == j) return 0.0;
    if (i < j) return upper_[v](pair_index(i, j));
    return -upper_[v](pair_index(j, i));
}

void TwoFormField::set_entry(Index v, int i, int j, double value) {
    if (i >= j) throw std::invalid_argument("TwoFormField: set_entry requires i < j");
    upper_[v](pair_index(i, j)) = value;
}

Eigen::MatrixXd TwoFormField::matrix(Index v) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            double x = upper_[v](pair_index(i, j));
            m(i, j) = x;
            m(j, i) = -x;
        }
    return m;
}

TwoFormField reconstruct_two_form(const TorusGrid& grid, const Cochain& omega) {
    int n = grid.dim();
    if (n < 2) throw std::invalid_argument("reconstruct_two_form: needs n >= 2");
    if (omega.degree() != 2 || omega.rank() != 1)
        throw std::invalid_argument("reconstruct_two_form: expects a scalar 2-cochain");
    TwoFormField field(n, grid.num_vertices());
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                int rank = grid.axis_set_rank({i, j});
                double sum = 0.0;
                for (int di = -1; di <= 0; ++di)
                    for (int dj = -1; dj <= 0; ++dj) {
                        Index base = grid.vertex_shift(grid.vertex_shift(v, i, di), j, dj);
                        sum += omega.values()(0, static_cast<Index>(rank) * grid.num_vertices() + base);
                    }
                field.set_entry(v, i, j, sum / 4.0 / (grid.spacing(i) * grid.spacing(j)));
            }
    }
    return field;
}

NondegenerateReport check_nondegenerate(const TwoFormField& field, double eps) {
    NondegenerateReport report;
    report.min_abs_det = std::numeric_limits<double>::infinity();
    for (Index v = 0; v < field.num_vertices(); ++v)
        report.min_abs_det = std::min(report.min_abs_det, std::abs(field.matrix(v).determinant()));
    if (field.num_vertices() == 0) report.min_abs_det = 0.0;
    report.ok = report.min_abs_det >= eps;
    return report;
}

namespace {

const Eigen::MatrixXd& metric_at(const std::vector<Eigen::MatrixXd>& g, Index v) {
    return g.size() == 1 ? g.front() : g[v];
}

}  // namespace

AcReport check_ac_orthogonal(const JField& j, const std::vector<Eigen::MatrixXd>& g) {
    AcReport report;
    int n = j.dim();
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (Index v = 0; v < j.num_vertices(); ++v) {
        const Eigen::MatrixXd& jv = j.values[v];
        const Eigen::MatrixXd& gv = metric_at(g, v);
        report.ac_residual = std::max(report.ac_residual, (jv * jv + id).norm());
        report.orth_residual =
            std::max(report.orth_residual, (jv.transpose() * gv * jv - gv).norm());
    }
    return report;
}

AcReport check_ac_orthogonal(const JField& j, const Eigen::MatrixXd& g) {
    return check_ac_orthogonal(j, std::vector<Eigen::MatrixXd>{g});
}

JField project_ac_g(const JField& field, const std::vector<Eigen::MatrixXd>& g) {
    int n = field.dim();
    if (n % 2 != 0) throw std::invalid_argument("project_ac_g: dimension must be even");
    JField out;
    out.values.reserve(field.values.size());
    for (Index v = 0; v < field.num_vertices(); ++v) {
        const Eigen::MatrixXd& gv = metric_at(g, v);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gv);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw std::invalid_argument("project_ac_g: metric not positive definite");
        Eigen::MatrixXd ghalf = es.operatorSqrt();
        Eigen::MatrixXd ghalf_inv = es.operatorInverseSqrt();

        Eigen::MatrixXd a = ghalf * field.values[v] * ghalf_inv;
        Eigen::MatrixXd skew = 0.5 * (a - a.transpose());
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(skew, Eigen::ComputeFullU | Eigen::ComputeFullV);
        double smax = svd.singularValues().maxCoeff();
        if (smax == 0.0 || svd.singularValues().minCoeff() < 1e-12 * smax)
            throw std::runtime_error("project_ac_g: singular skew part at vertex " +
                                     std::to_string(v));
        // Orthogonal polar factor of a skew matrix is skew and orthogonal,
        // hence an anti-involution.
        Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
        out.values.push_back(ghalf_inv * q * ghalf);
    }
    return out;
}

JField project_ac_g(const JField& field, const Eigen::MatrixXd& g) {
    return project_ac_g(field, std::vector<Eigen::MatrixXd>{g});
}

Cochain to_end_cochain(const TorusGrid& grid, const JField& j) {
    int n = j.dim();
    Cochain c(grid, n * n, 0);
    for (Index v = 0; v < grid.num_vertices(); ++v)
        c.value(v) = Eigen::Map<const Eigen::VectorXd>(j.values[v].data(), n * n);
    return c;
}

JField from_end_cochain(const TorusGrid& grid, const Cochain& c) {
    int nn = c.rank();
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
    if (n * n != nn || c.degree() != 0)
        throw std::invalid_argument("from_end_cochain: expects a degree-0 cochain of square rank");
    JField j;
    j.values.reserve(grid.num_vertices());
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        Eigen::VectorXd col = c.value(v);
        j.values.push_back(Eigen::Map<const Eigen::MatrixXd>(col.data(), n, n));
    }
    return j;
}

Cochain to_tangent_cochain(const TorusGrid& grid, const JField& j) {
    int n = grid.dim();
    Cochain c(grid, n, 1);
    for (int axis = 0; axis < n; ++axis)
        for (Index v = 0; v < grid.num_vertices(); ++v)
            c.value(grid.edge_id(v, axis)) = grid.spacing(axis) * j.values[v].col(axis);
    return c;
}

JField from_tangent_cochain(const TorusGrid& grid, const Cochain& c) {
    int n = grid.dim();
    if (c.degree() != 1 || c.rank() != n)
        throw std::invalid_argument("from_tangent_cochain: expects a rank-n 1-cochain");
    JField j;
    j.values.assign(grid.num_vertices(), Eigen::MatrixXd::Zero(n, n));
    for (int axis = 0; axis < n; ++axis)
        for (Index v = 0; v < grid.num_vertices(); ++v)
            j.values[v].col(axis) = c.value(grid.edge_id(v, axis)) / grid.spacing(axis);
    return j;
}

double kaehler_residual(const TorusGrid& grid, const BundleData& tangent, const JField& j) {
    BundleData endb = induced_end_bundle(grid, tangent);
    Cochain c = to_end_cochain(grid, j);
    return norm(grid, endb, d_cov(grid, endb, c));
}

double special_complex_residual(const TorusGrid& grid, const BundleData& tangent, const JField& j) {
    Cochain c = to_tangent_cochain(grid, j);
    return norm(grid, tangent, d_cov(grid, tangent, c));
}

double nijenhuis_residual(const TorusGrid& grid, const JField& j) {
    int n = grid.dim();
    double worst = 0.0;
    std::vector<Eigen::MatrixXd> dj(n);
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        for (int l = 0; l < n; ++l) {
            Index fwd = grid.vertex_shift(v, l, 1);
            Index bwd = grid.vertex_shift(v, l, -1);
            dj[l] = (j.values[fwd] - j.values[bwd]) / (2.0 * grid.spacing(l));
        }
        const Eigen::MatrixXd& jv = j.values[v];
        auto dir_deriv = [&](const Eigen::VectorXd& w) {
            Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
            for (int l = 0; l < n; ++l) d += w(l) * dj[l];
            return d;
        };
        for (int i = 0; i < n; ++i)
            for (int jj = i + 1; jj < n; ++jj) {
                Eigen::VectorXd ji = jv.col(i);   // J e_i
                Eigen::VectorXd jjv = jv.col(jj); // J e_j
                Eigen::VectorXd nij = dir_deriv(ji).col(jj) - dir_deriv(jjv).col(i) +
                                      jv * dj[jj].col(i) - jv * dj[i].col(jj);
                worst = std::max(worst, nij.norm());
            }
    }
    return worst;
}

Eigen::MatrixXd standard_complex_structure(int n) {
    if (n % 2 != 0) throw std::invalid_argument("standard_complex_structure: n must be even");
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; i += 2) {
        j(i, i + 1) = -1.0;
        j(i + 1, i) = 1.0;
    }
    return j;
}

}  // namespace covforms
