#pragma once

// Shared generators for the test suites: random gauge frames, gauge action
// on cochains, and random metric-compatible bundles.

#include <vector>

#include "covforms/bundle.hpp"
#include "covforms/cochain.hpp"
#include "covforms/grid.hpp"
#include "covforms/rng.hpp"

namespace covforms::testing {

inline std::vector<Eigen::MatrixXd> random_frames(const TorusGrid& grid, int rank,
                                                  std::uint64_t seed, double amplitude = 0.3) {
    Rng rng(seed);
    std::vector<Eigen::MatrixXd> frames;
    for (Index v = 0; v < grid.num_vertices(); ++v) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(rank, rank);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j) a(i, j) += rng.symmetric(amplitude);
        frames.push_back(a);
    }
    return frames;
}

// Fiber values transform by the inverse frame at the anchor, matching the
// transport rule U' = s_head^{-1} U s_tail.
inline Cochain gauge_cochain(const TorusGrid& grid, const std::vector<Eigen::MatrixXd>& frames,
                             const Cochain& c) {
    Cochain out = c;
    std::vector<Eigen::MatrixXd> inv;
    for (const auto& f : frames) inv.push_back(f.inverse());
    for (Index id = 0; id < c.num_cells(); ++id)
        out.value(id) = inv[grid.anchor_vertex(grid.cell(c.degree(), id))] * c.value(id);
    return out;
}

inline GradedCochain gauge_graded(const TorusGrid& grid,
                                  const std::vector<Eigen::MatrixXd>& frames,
                                  const GradedCochain& g) {
    GradedCochain out(g.dim());
    for (int k = 0; k <= g.dim(); ++k)
        if (g.has(k)) out.set(gauge_cochain(grid, frames, g.at(k)));
    return out;
}

// Random bundle with non-identity SPD metrics and metric-compatible,
// generically curved transports: a random gauge of a random orthogonal
// connection (compatibility is gauge invariant).
inline BundleData random_compatible_bundle(const TorusGrid& grid, int rank, std::uint64_t seed,
                                           double strength = 0.5) {
    BundleData ortho = BundleData::random_orthogonal(grid, rank, seed, strength);
    return gauge_transform(grid, ortho, random_frames(grid, rank, seed + 1));
}

}  // namespace covforms::testing
