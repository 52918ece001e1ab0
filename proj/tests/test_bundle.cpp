#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "covforms/bundle.hpp"
#include "covforms/calculus.hpp"
#include "covforms/cochain.hpp"
#include "covforms/rng.hpp"
#include "helpers.hpp"

using namespace covforms;
using namespace covforms::testing;

TEST_CASE("trivial bundle basics") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 4);
    CHECK(b.rank() == 4);
    CHECK(b.metric_compatibility_residual(grid) == 0.0);
    for (Index id = 0; id < grid.num_cells(2); ++id) {
        Eigen::MatrixXd hol = plaquette_holonomy(grid, b, grid.cell(2, id));
        CHECK((hol - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    }

    TorusGrid t3(3, {3, 3, 3}, {1.0, 1.0, 1.0});
    CHECK(BundleData::trivial(t3, 2).metric_compatibility_residual(t3) == 0.0);
}

TEST_CASE("transport paths") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::pure_gauge(grid, 2, 7);

    CHECK((transport_path(grid, b, {}) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);

    OrientedEdge e{0, 0, false};
    OrientedEdge back{0, 0, true};
    Eigen::MatrixXd round = transport_path(grid, b, {e, back});
    CHECK((round - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);

    // boundary loop of a plaquette on a flat bundle
    Cell c{{0, 1}, {1, 2}};
    CHECK((plaquette_holonomy(grid, b, c) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);

    OrientedEdge skip{5, 1, false};
    CHECK_THROWS_AS(transport_path(grid, b, {e, skip}), std::invalid_argument);
}

TEST_CASE("closed null-homotopic loop on a flat bundle") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::pure_gauge(grid, 3, 21);
    // walk around a 2 x 1 rectangle of plaquettes
    Index v00 = grid.vertex_id({0, 0});
    Index v10 = grid.vertex_id({1, 0});
    Index v20 = grid.vertex_id({2, 0});
    Index v11 = grid.vertex_id({1, 1});
    Index v01 = grid.vertex_id({0, 1});
    std::vector<OrientedEdge> loop = {
        {v00, 0, false}, {v10, 0, false}, {v20, 1, false},
        {v11, 0, true},  {v01, 0, true},  {v00, 1, true},
    };
    CHECK((transport_path(grid, b, loop) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("gauge transform") {
    TorusGrid grid(2, {4, 4}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 3);

    SUBCASE("identity gauge leaves the bundle unchanged") {
        std::vector<Eigen::MatrixXd> id(grid.num_vertices(), Eigen::MatrixXd::Identity(3, 3));
        BundleData g = gauge_transform(grid, b, id);
        for (int axis = 0; axis < 2; ++axis)
            for (Index v = 0; v < grid.num_vertices(); ++v)
                CHECK((g.transport(grid.edge_id(v, axis)) - Eigen::MatrixXd::Identity(3, 3)).norm() ==
                      0.0);
    }

    SUBCASE("gauged trivial bundle stays flat") {
        BundleData g = gauge_transform(grid, b, random_frames(grid, 3, 3));
        for (Index id = 0; id < grid.num_cells(2); ++id)
            CHECK((plaquette_holonomy(grid, g, grid.cell(2, id)) -
                   Eigen::MatrixXd::Identity(3, 3))
                      .norm() < 1e-12);
    }

    SUBCASE("singular frames are rejected") {
        auto frames = random_frames(grid, 3, 3);
        frames[5].setZero();
        CHECK_THROWS_AS(gauge_transform(grid, b, frames), std::invalid_argument);
    }
}

TEST_CASE("gauge invariance of inner products") {
    TorusGrid grid(2, {3, 4}, {1.0, 0.5});
    BundleData b = BundleData::random_orthogonal(grid, 2, 11, 0.4);
    auto frames = random_frames(grid, 2, 5);
    BundleData gb = gauge_transform(grid, b, frames);

    GradedCochain a = random_graded_cochain(grid, b, 100, 1.0);
    GradedCochain c = random_graded_cochain(grid, b, 200, 1.0);
    GradedCochain ga = gauge_graded(grid, frames, a);
    GradedCochain gc = gauge_graded(grid, frames, c);

    double lhs = inner(grid, b, a, c);
    double rhs = inner(grid, gb, ga, gc);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
}

TEST_CASE("plaquette holonomy matches the explicit 4-matrix product") {
    TorusGrid grid(2, {3, 3}, {1.0, 1.0});
    // rank-1 connection with phases on axis 0 only
    Rng rng(99);
    std::vector<Eigen::MatrixXd> u(grid.num_vertices() * 2, Eigen::MatrixXd::Identity(1, 1));
    std::vector<double> theta(grid.num_vertices());
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        theta[v] = rng.symmetric(0.8);
        u[grid.edge_id(v, 0)](0, 0) = std::exp(theta[v]);
    }
    std::vector<Eigen::MatrixXd> h(grid.num_vertices(), Eigen::MatrixXd::Identity(1, 1));
    BundleData b(grid, 1, h, u);

    for (Index v = 0; v < grid.num_vertices(); ++v) {
        Cell c{{0, 1}, grid.vertex_coords(v)};
        Index vj = grid.vertex_shift(v, 1, 1);
        double expected = std::exp(theta[v] - theta[vj]);
        Eigen::MatrixXd hol = plaquette_holonomy(grid, b, c);
        CHECK(hol(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("induced endomorphism bundle") {
    TorusGrid grid(2, {3, 3}, {1.0, 1.0});

    SUBCASE("trivial base gives identity transports") {
        BundleData b = BundleData::trivial(grid, 2);
        BundleData endb = induced_end_bundle(grid, b);
        CHECK(endb.rank() == 4);
        for (int axis = 0; axis < 2; ++axis)
            CHECK((endb.transport(grid.edge_id(0, axis)) - Eigen::MatrixXd::Identity(4, 4)).norm() ==
                  0.0);
    }

    SUBCASE("conjugation fixes the identity fiber and preserves traces") {
        BundleData b = BundleData::random_orthogonal(grid, 3, 5, 0.7);
        BundleData endb = induced_end_bundle(grid, b);
        Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
        Eigen::Map<const Eigen::VectorXd> vec_id(id.data(), 9);

        std::vector<OrientedEdge> path = {
            {grid.vertex_id({0, 0}), 0, false}, {grid.vertex_id({1, 0}), 1, false},
            {grid.vertex_id({1, 1}), 0, false}};
        Eigen::MatrixXd p = transport_path(grid, endb, path);
        CHECK((p * vec_id - vec_id).norm() < 1e-12);

        Rng rng(42);
        Eigen::MatrixXd a(3, 3);
        for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = rng.symmetric(1.0);
        Eigen::VectorXd moved = p * Eigen::Map<const Eigen::VectorXd>(a.data(), 9);
        Eigen::Map<const Eigen::MatrixXd> moved_mat(moved.data(), 3, 3);
        CHECK(moved_mat.trace() == doctest::Approx(a.trace()).epsilon(1e-12));
    }
}

TEST_CASE("morphism checks") {
    TorusGrid grid(2, {3, 3}, {1.0, 1.0});
    BundleData b = BundleData::trivial(grid, 3);

    SUBCASE("identity morphism") {
        std::vector<Eigen::MatrixXd> sigma(grid.num_vertices(), Eigen::MatrixXd::Identity(3, 3));
        auto always = [](const Cochain&) { return true; };
        std::vector<Cochain> samples = {random_cochain(grid, b, 0, 1, 1.0)};
        MorphismReport r = check_morphism(grid, sigma, b, b, always, always, samples);
        CHECK(r.naturality_residual == 0.0);
        CHECK(r.isometry_residual == 0.0);
        CHECK(r.inclusion_ok);
    }

    SUBCASE("constant orthogonal sigma is an isometry of trivial metrics") {
        Rng rng(8);
        Eigen::MatrixXd skew = Eigen::MatrixXd::Zero(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                skew(i, j) = rng.symmetric(1.0);
                skew(j, i) = -skew(i, j);
            }
        Eigen::MatrixXd q =
            (Eigen::MatrixXd::Identity(3, 3) - skew).lu().solve(Eigen::MatrixXd::Identity(3, 3) + skew);
        std::vector<Eigen::MatrixXd> sigma(grid.num_vertices(), q);
        MorphismReport r = check_morphism(grid, sigma, b, b, nullptr, nullptr, {});
        CHECK(r.isometry_residual < 1e-13);
    }

    SUBCASE("sigma = 2 I has isometry residual 3 sqrt(m)") {
        std::vector<Eigen::MatrixXd> sigma(grid.num_vertices(),
                                           2.0 * Eigen::MatrixXd::Identity(3, 3));
        MorphismReport r = check_morphism(grid, sigma, b, b, nullptr, nullptr, {});
        CHECK(r.isometry_residual == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-14));
    }

    SUBCASE("rank mismatch is rejected") {
        BundleData b2 = BundleData::trivial(grid, 2);
        std::vector<Eigen::MatrixXd> sigma(grid.num_vertices(), Eigen::MatrixXd::Identity(3, 3));
        CHECK_THROWS_AS(check_morphism(grid, sigma, b, b2, nullptr, nullptr, {}),
                        std::invalid_argument);
    }

    SUBCASE("inclusion predicate failure is reported") {
        std::vector<Eigen::MatrixXd> sigma(grid.num_vertices(),
                                           2.0 * Eigen::MatrixXd::Identity(3, 3));
        auto small = [&](const Cochain& c) { return c.values().cwiseAbs().maxCoeff() <= 1.0; };
        std::vector<Cochain> samples = {random_cochain(grid, b, 0, 2, 1.0)};
        MorphismReport r = check_morphism(grid, sigma, b, b, small, small, samples);
        CHECK_FALSE(r.inclusion_ok);
    }
}

TEST_CASE("metric compatibility holds for gauged orthogonal connections") {
    TorusGrid grid(2, {3, 3}, {1.0, 1.0});
    BundleData b = BundleData::random_orthogonal(grid, 2, 3, 0.5);
    CHECK(b.metric_compatibility_residual(grid) < 1e-13);
    BundleData g = gauge_transform(grid, b, random_frames(grid, 2, 9));
    CHECK(g.metric_compatibility_residual(grid) < 1e-12);
}
