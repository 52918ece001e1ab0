#pragma once

/// @file calculus.hpp
/// Weighted L2 inner products, diagonal Hodge weights, the covariant
/// coboundary d and its exact adjoint delta, the masked operators d[k] and
/// delta[k], and the curvature action d(d(.)).
///
/// Conventions:
///  - Cochain values are integrals of the underlying form over cells; the
///    mass of a cell is primal_volume * hodge_weight.
///  - (d alpha)(c) = sum over signed faces f of c of
///        sign * P_{anchor(f) -> anchor(c)} alpha(f),
///    where P transports along the (at most one) edge separating the two
///    anchors, traversed toward the anchor of c. Anchor-to-anchor paths
///    follow ascending axis order, which here always degenerates to a single
///    edge or the empty path.
///  - delta is the literal adjoint of d in the weighted inner product, with
///    no extra sign normalization: it is assembled per cell by transposed
///    transports and an SPD metric solve at each anchor, so adjointness
///    holds for arbitrary invertible transports and SPD metrics.

#include "covforms/bundle.hpp"
#include "covforms/cochain.hpp"
#include "covforms/grid.hpp"

namespace covforms {

/// Diagonal Hodge weight dual_volume / primal_volume of a cell.
double hodge_weight(const TorusGrid& grid, const Cell& c);

/// L2 mass of a cell: primal_volume * hodge_weight.
double cell_mass(const TorusGrid& grid, const Cell& c);

/// Weighted inner product of two equal-degree cochains:
/// sum over cells of mass(c) * <A(c), H_anchor B(c)>.
double inner(const TorusGrid& grid, const BundleData& b, const Cochain& a, const Cochain& c);

/// Graded inner product: sum over shared degrees.
double inner(const TorusGrid& grid, const BundleData& b, const GradedCochain& a,
             const GradedCochain& c);

double norm(const TorusGrid& grid, const BundleData& b, const Cochain& a);
double norm(const TorusGrid& grid, const BundleData& b, const GradedCochain& a);

/// Covariant coboundary, degree k -> k+1. Throws for k = n.
Cochain d_cov(const TorusGrid& grid, const BundleData& b, const Cochain& alpha);

/// Adjoint of d_cov, degree k -> k-1. Throws for k = 0.
Cochain delta_cov(const TorusGrid& grid, const BundleData& b, const Cochain& beta);

/// d[k]: applies d_cov to every component of degree i != k-1 (degree n maps
/// to nothing); the degree-(k-1) image is dropped.
GradedCochain masked_d(int k, const TorusGrid& grid, const BundleData& b, const GradedCochain& g);

/// delta[k]: applies delta_cov to every component of degree i != k.
GradedCochain masked_delta(int k, const TorusGrid& grid, const BundleData& b,
                           const GradedCochain& g);

/// d(d(alpha)): zero exactly when the plaquette holonomies act trivially on
/// the values of alpha.
Cochain curvature_action(const TorusGrid& grid, const BundleData& b, const Cochain& alpha);

}  // namespace covforms
