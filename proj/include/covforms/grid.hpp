#pragma once

/// @file grid.hpp
/// Periodic cubical complex on the flat torus T^n = prod_i R/(N_i h_i).
///
/// Cells are axis-aligned cubes: a k-cell spans an ascending set of k axes
/// and is anchored at its minimal corner ("base" vertex). All fiber data of
/// bundle-valued cochains attaches at the anchor.
///
/// Cell ordering is lexicographic by (axes, base): cells of degree k are
/// numbered id = rank(axes) * num_vertices() + linear(base), where axis sets
/// are ranked lexicographically and bases row-major with axis 0 slowest.
///
/// Boundary sign convention: for a k-cell spanning axes s_0 < ... < s_{k-1},
/// the face omitting axis s_j on the far side (base shifted by +e_{s_j})
/// gets sign (-1)^j, the near-side face gets (-1)^{j+1}. This satisfies
/// boundary(boundary(c)) = 0.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace covforms {

using Index = std::int64_t;

/// A k-cell of the periodic cubical complex.
struct Cell {
    std::vector<int> axes;  ///< spanned axes, strictly increasing, 0-based
    std::vector<int> base;  ///< anchor vertex multi-index, reduced mod sizes

    int degree() const { return static_cast<int>(axes.size()); }
};

class TorusGrid {
public:
    /// Builds the complex. Requires n >= 1, all sizes >= 3, all spacings > 0.
    TorusGrid(int n, std::vector<int> sizes, std::vector<double> spacings);

    int dim() const { return n_; }
    int size(int axis) const { return sizes_[axis]; }
    double spacing(int axis) const { return spacings_[axis]; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& spacings() const { return spacings_; }

    Index num_vertices() const { return num_vertices_; }
    Index num_cells(int k) const;
    int num_axis_sets(int k) const;
    const std::vector<int>& axis_set(int k, int rank) const;
    int axis_set_rank(const std::vector<int>& axes) const;

    Index vertex_id(const std::vector<int>& coords) const;
    std::vector<int> vertex_coords(Index v) const;
    /// Periodic shift of a vertex along one axis (steps may be negative).
    Index vertex_shift(Index v, int axis, int steps) const;

    Cell cell(int k, Index id) const;
    Index cell_id(const Cell& c) const;
    Index anchor_vertex(const Cell& c) const { return vertex_id(c.base); }

    /// Canonical oriented edge along +axis starting at vertex v.
    Index edge_id(Index v, int axis) const { return static_cast<Index>(axis) * num_vertices_ + v; }

    /// Face of a cell boundary, annotated with the omitted axis and side.
    struct Face {
        Cell cell;
        int sign;   ///< +1 or -1
        int axis;   ///< the omitted axis
        bool far;   ///< true when the face sits at base + e_axis
    };
    /// The 2k signed faces of a k-cell (empty list for vertices).
    std::vector<Face> boundary_faces(const Cell& c) const;
    /// Signed boundary as (face, sign) pairs.
    std::vector<std::pair<Cell, int>> boundary(const Cell& c) const;

    double primal_volume(const Cell& c) const;
    double dual_volume(const Cell& c) const;
    /// primal * dual = prod_i h_i for every cell.
    std::pair<double, double> volumes(const Cell& c) const;
    double total_volume() const;

    /// Throws std::invalid_argument when the cell is malformed for this grid.
    void validate_cell(const Cell& c) const;

    bool same_shape(const TorusGrid& other) const;

private:
    int n_;
    std::vector<int> sizes_;
    std::vector<double> spacings_;
    std::vector<Index> strides_;          // row-major, axis 0 slowest
    Index num_vertices_;
    double cell_volume_;                  // prod_i h_i
    std::vector<std::vector<std::vector<int>>> axis_sets_;  // [k][rank] -> axes
    std::vector<std::vector<int>> rank_by_mask_;            // [k][bitmask] -> rank
};

}  // namespace covforms
