#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "covforms/calculus.hpp"
#include "covforms/rng.hpp"
#include "helpers.hpp"

using namespace covforms;
using namespace covforms::testing;

TEST_CASE("hodge weights") {
    TorusGrid unit(2, {4, 4}, {1.0, 1.0});
    for (int k = 0; k <= 2; ++k) CHECK(hodge_weight(unit, unit.cell(k, 0)) == 1.0);

    TorusGrid grid(2, {4, 4}, {2.0, 0.5});
    Cell edge0{{0}, {0, 0}};
    CHECK(hodge_weight(grid, edge0) == doctest::Approx(0.25));
    Cell vertex{{}, {0, 0}};
    CHECK(hodge_weight(grid, vertex) == doctest::Approx(1.0));
}

TEST_CASE("inner product basics") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 3);

    Cochain zero(grid, 3, 1);
    CHECK(inner(grid, b, zero, zero) == 0.0);

    Cochain point(grid, 3, 0);
    Eigen::Vector3d v(1.5, -2.0, 0.25);
    point.value(5) = v;
    CHECK(inner(grid, b, point, point) == doctest::Approx(v.squaredNorm()).epsilon(1e-15));

    // symmetric bilinear on random inputs with a random SPD metric
    BundleData rb = random_compatible_bundle(grid, 2, 31);
    GradedCochain a = random_graded_cochain(grid, rb, 7, 1.0);
    GradedCochain c = random_graded_cochain(grid, rb, 8, 1.0);
    double ab = inner(grid, rb, a, c);
    double ba = inner(grid, rb, c, a);
    CHECK(std::abs(ab - ba) <= 1e-12 * (1.0 + std::abs(ab)));

    // positive definite
    CHECK(inner(grid, rb, a, a) > 0.0);

    Cochain wrong(grid, 2, 1);
    CHECK_THROWS_AS(inner(grid, b, zero, wrong), std::invalid_argument);
}

TEST_CASE("d of d vanishes on flat bundles") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 1);
    Cochain f = random_cochain(grid, b, 0, 12, 1.0);
    Cochain ddf = d_cov(grid, b, d_cov(grid, b, f));
    CHECK(norm(grid, b, ddf) <= 1e-12 * norm(grid, b, f));

    Cochain constant(grid, 1, 0);
    constant.values().setConstant(3.5);
    CHECK(d_cov(grid, b, constant).values().cwiseAbs().maxCoeff() == 0.0);

    Cochain top(grid, 1, 2);
    CHECK_THROWS_AS(d_cov(grid, b, top), std::invalid_argument);
}

TEST_CASE("d matches the hand-rolled plaquette sum for rank-1 transports") {
    TorusGrid grid(2, {3, 3}, {1.0, 1.0});
    Rng rng(77);
    Index nv = grid.num_vertices();
    std::vector<Eigen::MatrixXd> u(nv * 2, Eigen::MatrixXd::Identity(1, 1));
    for (auto& m : u) m(0, 0) = std::exp(rng.symmetric(0.6));
    std::vector<Eigen::MatrixXd> h(nv, Eigen::MatrixXd::Identity(1, 1));
    BundleData b(grid, 1, h, u);

    Cochain alpha = random_cochain(grid, b, 1, 5, 1.0);
    Cochain d_alpha = d_cov(grid, b, alpha);

    // Independent evaluation: for a plaquette based at v spanning (0,1),
    // boundary = +E1(v+e0) - E1(v) - E0(v+e1) + E0(v), far faces pulled back
    // through the inverse transport of the omitted base edge.
    auto edge_value = [&](int axis, Index vertex) { return alpha.values()(0, axis * nv + vertex); };
    auto inv_u = [&](int axis, Index vertex) { return 1.0 / u[axis * nv + vertex](0, 0); };
    for (Index v = 0; v < nv; ++v) {
        Index v0 = grid.vertex_shift(v, 0, 1);
        Index v1 = grid.vertex_shift(v, 1, 1);
        double expected = inv_u(0, v) * edge_value(1, v0) - edge_value(1, v) -
                          inv_u(1, v) * edge_value(0, v1) + edge_value(0, v);
        CHECK(d_alpha.values()(0, v) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("delta basics") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 1);

    Cochain zero(grid, 1, 2);
    CHECK(delta_cov(grid, b, zero).values().cwiseAbs().maxCoeff() == 0.0);

    Cochain constant(grid, 1, 0);
    constant.values().setConstant(1.0);
    Cochain dd = delta_cov(grid, b, d_cov(grid, b, constant));
    CHECK(dd.values().cwiseAbs().maxCoeff() == 0.0);

    Cochain f(grid, 1, 0);
    CHECK_THROWS_AS(delta_cov(grid, b, f), std::invalid_argument);
}

TEST_CASE("adjointness of d and delta on a random metric-compatible bundle") {
    TorusGrid grid(3, {3, 3, 3}, {1.0, 0.5, 2.0});
    BundleData b = random_compatible_bundle(grid, 2, 17);
    CHECK(b.metric_compatibility_residual(grid) < 1e-12);
    for (int k = 0; k < 3; ++k) {
        Cochain alpha = random_cochain(grid, b, k, 100 + k, 1.0);
        Cochain beta = random_cochain(grid, b, k + 1, 200 + k, 1.0);
        double lhs = inner(grid, b, d_cov(grid, b, alpha), beta);
        double rhs = inner(grid, b, alpha, delta_cov(grid, b, beta));
        double scale = norm(grid, b, alpha) * norm(grid, b, beta);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
}

TEST_CASE("adjointness also holds for non-compatible metric/transport pairs") {
    TorusGrid grid(2, {4, 3}, {1.0, 1.5});
    // orthogonal transports with an unrelated random SPD metric
    BundleData ortho = BundleData::random_orthogonal(grid, 3, 23, 0.8);
    Rng rng(5);
    std::vector<Eigen::MatrixXd> h;
    std::vector<Eigen::MatrixXd> u;
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        Eigen::MatrixXd a(3, 3);
        for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = rng.symmetric(0.4);
        h.push_back(Eigen::MatrixXd::Identity(3, 3) + a * a.transpose());
    }
    for (Index e = 0; e < grid.num_vertices() * 2; ++e) u.push_back(ortho.transport(e));
    BundleData b(grid, 3, h, u);
    CHECK(b.metric_compatibility_residual(grid) > 1e-3);  // genuinely incompatible

    for (int k = 0; k < 2; ++k) {
        Cochain alpha = random_cochain(grid, b, k, 300 + k, 1.0);
        Cochain beta = random_cochain(grid, b, k + 1, 400 + k, 1.0);
        double lhs = inner(grid, b, d_cov(grid, b, alpha), beta);
        double rhs = inner(grid, b, alpha, delta_cov(grid, b, beta));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * norm(grid, b, alpha) * norm(grid, b, beta));
    }
}

TEST_CASE("masked operators") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 2);
    int k = 1;

    SUBCASE("the mask kills degree k-1 inputs of d[k]") {
        GradedCochain g(2);
        g.set(random_cochain(grid, b, k - 1, 3, 1.0));
        GradedCochain out = masked_d(k, grid, b, g);
        for (int l = 0; l <= 2; ++l) CHECK_FALSE(out.has(l));
    }

    SUBCASE("degree-k inputs pass through d[k] unchanged, bit for bit") {
        GradedCochain g(2);
        g.set(random_cochain(grid, b, k, 4, 1.0));
        GradedCochain out = masked_d(k, grid, b, g);
        REQUIRE(out.has(k + 1));
        Cochain direct = d_cov(grid, b, g.at(k));
        CHECK((out.at(k + 1).values() - direct.values()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("k = 0 masks nothing (no degree -1 exists)") {
        GradedCochain g = random_graded_cochain(grid, b, 5, 1.0);
        GradedCochain out = masked_d(0, grid, b, g);
        for (int i = 0; i < 2; ++i) {
            Cochain direct = d_cov(grid, b, g.at(i));
            CHECK((out.at(i + 1).values() - direct.values()).cwiseAbs().maxCoeff() == 0.0);
        }
    }

    SUBCASE("the mask kills degree k inputs of delta[k]") {
        GradedCochain g(2);
        g.set(random_cochain(grid, b, k, 6, 1.0));
        GradedCochain out = masked_delta(k, grid, b, g);
        for (int l = 0; l <= 2; ++l) CHECK_FALSE(out.has(l));
    }

    SUBCASE("degree k+2 inputs map through delta into degree k+1") {
        TorusGrid t4(4, {3, 3, 3, 3}, {1.0, 1.0, 1.0, 1.0});
        BundleData tb = BundleData::trivial(t4, 1);
        int kk = 1;
        GradedCochain g(4);
        g.set(random_cochain(t4, tb, kk + 2, 7, 1.0));
        GradedCochain out = masked_delta(kk, t4, tb, g);
        REQUIRE(out.has(kk + 1));
        Cochain direct = delta_cov(t4, tb, g.at(kk + 2));
        CHECK((out.at(kk + 1).values() - direct.values()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("masked adjointness on random graded inputs") {
        BundleData rb = random_compatible_bundle(grid, 2, 19);
        GradedCochain a = random_graded_cochain(grid, rb, 8, 1.0);
        GradedCochain c = random_graded_cochain(grid, rb, 9, 1.0);
        for (int kk = 0; kk <= 2; ++kk) {
            double lhs = inner(grid, rb, masked_d(kk, grid, rb, a), c);
            double rhs = inner(grid, rb, a, masked_delta(kk, grid, rb, c));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * norm(grid, rb, a) * norm(grid, rb, c));
        }
    }
}

TEST_CASE("curvature action") {
    SUBCASE("trivial connection is flat to rounding") {
        TorusGrid grid(3, {3, 3, 3}, {1.0, 1.0, 1.0});
        BundleData b = BundleData::trivial(grid, 2);
        for (int k = 0; k <= 1; ++k) {
            Cochain alpha = random_cochain(grid, b, k, 40 + k, 1.0);
            double r = norm(grid, b, curvature_action(grid, b, alpha));
            CHECK(r <= 1e-12 * norm(grid, b, alpha));
        }
    }

    SUBCASE("pure-gauge connection is flat to rounding") {
        TorusGrid grid(2, {4, 4}, {1.0, 1.0});
        BundleData b = BundleData::pure_gauge(grid, 2, 13);
        Cochain alpha = random_cochain(grid, b, 0, 44, 1.0);
        double r = norm(grid, b, curvature_action(grid, b, alpha));
        CHECK(r <= 1e-10 * norm(grid, b, alpha));
    }

    SUBCASE("non-flat connection matches the per-plaquette holonomy oracle") {
        TorusGrid grid(2, {3, 3}, {1.0, 1.0});
        BundleData b = BundleData::random_orthogonal(grid, 2, 3, 0.9);
        Cochain alpha = random_cochain(grid, b, 0, 45, 1.0);
        Cochain dd = curvature_action(grid, b, alpha);
        CHECK(norm(grid, b, dd) > 1e-3);

        // (dd alpha)(plaquette at v) = (P_a - P_b) alpha(w), where w is the far
        // corner and P_a, P_b transport w -> v around the two sides.
        Index nv = grid.num_vertices();
        for (Index v = 0; v < nv; ++v) {
            Index v0 = grid.vertex_shift(v, 0, 1);
            Index v1 = grid.vertex_shift(v, 1, 1);
            Index w = grid.vertex_shift(v0, 1, 1);
            Eigen::MatrixXd pa =
                b.transport_inverse(grid.edge_id(v, 0)) * b.transport_inverse(grid.edge_id(v0, 1));
            Eigen::MatrixXd pb =
                b.transport_inverse(grid.edge_id(v, 1)) * b.transport_inverse(grid.edge_id(v1, 0));
            Eigen::VectorXd expected = (pa - pb) * alpha.value(w);
            CHECK((dd.value(v) - expected).norm() <= 1e-10);
        }
    }
}

TEST_CASE("d commutes with gauge transformation") {
    TorusGrid grid(2, {3, 4}, {1.0, 1.0});
    BundleData b = BundleData::random_orthogonal(grid, 2, 29, 0.5);
    auto frames = random_frames(grid, 2, 30);
    BundleData gb = gauge_transform(grid, b, frames);

    for (int k = 0; k < 2; ++k) {
        Cochain alpha = random_cochain(grid, b, k, 50 + k, 1.0);
        Cochain lhs = gauge_cochain(grid, frames, d_cov(grid, b, alpha));
        Cochain rhs = d_cov(grid, gb, gauge_cochain(grid, frames, alpha));
        CHECK((lhs.values() - rhs.values()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("random cochains are reproducible and seed-sensitive") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 2);

    Cochain a = random_cochain(grid, b, 1, 77, 0.5);
    Cochain c = random_cochain(grid, b, 1, 77, 0.5);
    CHECK((a.values() - c.values()).cwiseAbs().maxCoeff() == 0.0);

    Cochain d = random_cochain(grid, b, 1, 78, 0.5);
    CHECK((a.values() - d.values()).cwiseAbs().maxCoeff() > 0.0);

    Cochain z = random_cochain(grid, b, 1, 77, 0.0);
    CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(random_cochain(grid, b, 3, 1, 1.0), std::invalid_argument);
}
