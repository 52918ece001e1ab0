#include "covforms/bundle.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "covforms/cochain.hpp"
#include "covforms/rng.hpp"

namespace covforms {

namespace {

Eigen::MatrixXd random_skew(Rng& rng, int m, double amplitude) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double x = rng.symmetric(amplitude);
            s(i, j) = x;
            s(j, i) = -x;
        }
    return s;
}

// Cayley transform of a skew matrix: orthogonal, never -1 in spectrum.
Eigen::MatrixXd cayley_orthogonal(const Eigen::MatrixXd& skew) {
    int m = static_cast<int>(skew.rows());
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
    return (id - skew).partialPivLu().solve(id + skew);
}

}  // namespace

BundleData::BundleData(const TorusGrid& grid, int rank, std::vector<Eigen::MatrixXd> metric,
                       std::vector<Eigen::MatrixXd> transport)
    : rank_(rank), dim_(grid.dim()), metric_(std::move(metric)), fwd_(std::move(transport)) {
    if (rank_ < 1) throw std::invalid_argument("BundleData: rank must be >= 1");
    Index nv = grid.num_vertices();
    if (static_cast<Index>(metric_.size()) != nv)
        throw std::invalid_argument("BundleData: one metric matrix per vertex required");
    if (static_cast<Index>(fwd_.size()) != nv * grid.dim())
        throw std::invalid_argument("BundleData: one transport matrix per edge required");

    llt_.reserve(metric_.size());
    for (Index v = 0; v < nv; ++v) {
        const Eigen::MatrixXd& h = metric_[v];
        if (h.rows() != rank_ || h.cols() != rank_)
            throw std::invalid_argument("BundleData: metric matrix has wrong size");
        if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + h.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("BundleData: metric matrix not symmetric");
        llt_.emplace_back(h);
        if (llt_.back().info() != Eigen::Success)
            throw std::invalid_argument("BundleData: metric matrix not positive definite");
    }

    bwd_.reserve(fwd_.size());
    for (auto& u : fwd_) {
        if (u.rows() != rank_ || u.cols() != rank_)
            throw std::invalid_argument("BundleData: transport matrix has wrong size");
        Eigen::FullPivLU<Eigen::MatrixXd> lu(u);
        if (!lu.isInvertible())
            throw std::invalid_argument("BundleData: transport matrix not invertible");
        bwd_.push_back(lu.inverse());
    }
}

bool BundleData::matches(const TorusGrid& grid) const {
    return dim_ == grid.dim() && static_cast<Index>(metric_.size()) == grid.num_vertices();
}

BundleData BundleData::trivial(const TorusGrid& grid, int rank) {
    Index nv = grid.num_vertices();
    std::vector<Eigen::MatrixXd> h(nv, Eigen::MatrixXd::Identity(rank, rank));
    std::vector<Eigen::MatrixXd> u(nv * grid.dim(), Eigen::MatrixXd::Identity(rank, rank));
    return BundleData(grid, rank, std::move(h), std::move(u));
}

BundleData BundleData::pure_gauge(const TorusGrid& grid, int rank, std::uint64_t seed) {
    Rng rng(seed);
    Index nv = grid.num_vertices();
    std::vector<Eigen::MatrixXd> frames;
    frames.reserve(nv);
    for (Index v = 0; v < nv; ++v) {
        Eigen::MatrixXd q = cayley_orthogonal(random_skew(rng, rank, 1.0));
        // Mild per-vertex scaling so the gauged metric is not identity.
        Eigen::VectorXd d(rank);
        for (int i = 0; i < rank; ++i) d(i) = rng.uniform(0.8, 1.25);
        frames.push_back(q * d.asDiagonal());
    }
    return gauge_transform(grid, trivial(grid, rank), frames);
}

BundleData BundleData::random_orthogonal(const TorusGrid& grid, int rank, std::uint64_t seed,
                                         double strength) {
    Rng rng(seed);
    Index nv = grid.num_vertices();
    std::vector<Eigen::MatrixXd> h(nv, Eigen::MatrixXd::Identity(rank, rank));
    std::vector<Eigen::MatrixXd> u;
    u.reserve(nv * grid.dim());
    for (int axis = 0; axis < grid.dim(); ++axis)
        for (Index v = 0; v < nv; ++v)
            u.push_back(cayley_orthogonal(random_skew(rng, rank, strength)));
    return BundleData(grid, rank, std::move(h), std::move(u));
}

BundleData BundleData::from_edge_file(const TorusGrid& grid, int rank, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open connection file: " + path);
    Index ne = grid.num_vertices() * grid.dim();
    std::vector<Eigen::MatrixXd> u(ne, Eigen::MatrixXd::Zero(rank, rank));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Index edge;
        int row, col;
        double value;
        if (!(ss >> edge >> row >> col >> value))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'edge row col value'");
        if (edge < 0 || edge >= ne || row < 0 || row >= rank || col < 0 || col >= rank)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": index out of range");
        u[edge](row, col) = value;
    }
    std::vector<Eigen::MatrixXd> h(grid.num_vertices(), Eigen::MatrixXd::Identity(rank, rank));
    return BundleData(grid, rank, std::move(h), std::move(u));
}

double BundleData::metric_compatibility_residual(const TorusGrid& grid) const {
    double worst = 0.0;
    for (int axis = 0; axis < dim_; ++axis)
        for (Index v = 0; v < num_vertices(); ++v) {
            Index e = grid.edge_id(v, axis);
            Index head = grid.vertex_shift(v, axis, 1);
            double r = (fwd_[e].transpose() * metric_[head] * fwd_[e] - metric_[v]).norm();
            worst = std::max(worst, r);
        }
    return worst;
}

BundleData gauge_transform(const TorusGrid& grid, const BundleData& b,
                           const std::vector<Eigen::MatrixXd>& frames, double cond_limit) {
    Index nv = grid.num_vertices();
    if (static_cast<Index>(frames.size()) != nv)
        throw std::invalid_argument("gauge_transform: one frame per vertex required");
    std::vector<Eigen::MatrixXd> inv;
    inv.reserve(nv);
    for (Index v = 0; v < nv; ++v) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(frames[v]);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        if (smin <= 0.0 || smax / smin > cond_limit)
            throw std::invalid_argument("gauge_transform: frame at vertex " + std::to_string(v) +
                                        " is singular or ill-conditioned");
        inv.push_back(frames[v].partialPivLu().inverse());
    }

    std::vector<Eigen::MatrixXd> h;
    h.reserve(nv);
    for (Index v = 0; v < nv; ++v) {
        Eigen::MatrixXd m = frames[v].transpose() * b.metric(v) * frames[v];
        h.push_back(0.5 * (m + m.transpose()));  // symmetrize roundoff
    }
    std::vector<Eigen::MatrixXd> u;
    u.reserve(nv * grid.dim());
    for (int axis = 0; axis < grid.dim(); ++axis)
        for (Index v = 0; v < nv; ++v) {
            Index head = grid.vertex_shift(v, axis, 1);
            u.push_back(inv[head] * b.transport(grid.edge_id(v, axis)) * frames[v]);
        }
    return BundleData(grid, b.rank(), std::move(h), std::move(u));
}

Eigen::MatrixXd transport_path(const TorusGrid& grid, const BundleData& b,
                               const std::vector<OrientedEdge>& path) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(b.rank(), b.rank());
    Index at = path.empty() ? Index{0} : path.front().tail(grid);
    for (const auto& e : path) {
        if (e.tail(grid) != at)
            throw std::invalid_argument("transport_path: edges are not consecutive");
        Index id = grid.edge_id(e.vertex, e.axis);
        p = (e.reverse ? b.transport_inverse(id) : b.transport(id)) * p;
        at = e.head(grid);
    }
    return p;
}

Eigen::MatrixXd plaquette_holonomy(const TorusGrid& grid, const BundleData& b, const Cell& c) {
    grid.validate_cell(c);
    if (c.degree() != 2) throw std::invalid_argument("plaquette_holonomy: cell must be a 2-cell");
    int i = c.axes[0], j = c.axes[1];
    Index v = grid.anchor_vertex(c);
    Index vi = grid.vertex_shift(v, i, 1);
    Index vj = grid.vertex_shift(v, j, 1);
    std::vector<OrientedEdge> loop = {
        {v, i, false}, {vi, j, false}, {vj, i, true}, {v, j, true}};
    return transport_path(grid, b, loop);
}

BundleData induced_end_bundle(const TorusGrid& grid, const BundleData& b) {
    int m = b.rank();
    int mm = m * m;
    Index nv = grid.num_vertices();
    std::vector<Eigen::MatrixXd> h(nv, Eigen::MatrixXd::Identity(mm, mm));
    std::vector<Eigen::MatrixXd> u;
    u.reserve(nv * grid.dim());
    for (int axis = 0; axis < grid.dim(); ++axis)
        for (Index v = 0; v < nv; ++v) {
            const Eigen::MatrixXd& t = b.transport(grid.edge_id(v, axis));
            const Eigen::MatrixXd& ti = b.transport_inverse(grid.edge_id(v, axis));
            // vec(U A U^{-1}) column-major: C((r,c),(a,d)) = U(r,a) * Uinv(d,c)
            Eigen::MatrixXd conj(mm, mm);
            for (int d = 0; d < m; ++d)
                for (int a = 0; a < m; ++a)
                    for (int cc = 0; cc < m; ++cc)
                        for (int r = 0; r < m; ++r)
                            conj(r + m * cc, a + m * d) = t(r, a) * ti(d, cc);
            u.push_back(std::move(conj));
        }
    return BundleData(grid, mm, std::move(h), std::move(u));
}

MorphismReport check_morphism(const TorusGrid& grid, const std::vector<Eigen::MatrixXd>& sigma,
                              const BundleData& bE, const BundleData& bF,
                              const std::function<bool(const Cochain&)>& u_pred,
                              const std::function<bool(const Cochain&)>& v_pred,
                              const std::vector<Cochain>& samples) {
    Index nv = grid.num_vertices();
    if (static_cast<Index>(sigma.size()) != nv)
        throw std::invalid_argument("check_morphism: one matrix per vertex required");
    for (const auto& s : sigma)
        if (s.rows() != bF.rank() || s.cols() != bE.rank())
            throw std::invalid_argument("check_morphism: sigma must be rank(F) x rank(E)");

    MorphismReport report;
    for (int axis = 0; axis < grid.dim(); ++axis)
        for (Index v = 0; v < nv; ++v) {
            Index e = grid.edge_id(v, axis);
            Index head = grid.vertex_shift(v, axis, 1);
            double r = (sigma[head] * bE.transport(e) - bF.transport(e) * sigma[v]).norm();
            report.naturality_residual = std::max(report.naturality_residual, r);
        }
    for (Index v = 0; v < nv; ++v) {
        double r = (sigma[v].transpose() * bF.metric(v) * sigma[v] - bE.metric(v)).norm();
        report.isometry_residual = std::max(report.isometry_residual, r);
    }

    for (const Cochain& s : samples) {
        if (!u_pred || !u_pred(s)) continue;
        Cochain mapped(grid, bF.rank(), s.degree());
        for (Index id = 0; id < s.num_cells(); ++id) {
            Index anchor = grid.anchor_vertex(grid.cell(s.degree(), id));
            mapped.value(id) = sigma[anchor] * s.value(id);
        }
        if (v_pred && !v_pred(mapped)) report.inclusion_ok = false;
    }
    return report;
}

}  // namespace covforms
