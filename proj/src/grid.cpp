#include "covforms/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace covforms {

namespace {

int wrap(int x, int n) {
    int r = x % n;
    return r < 0 ? r + n : r;
}

std::uint32_t axes_mask(const std::vector<int>& axes) {
    std::uint32_t m = 0;
    for (int a : axes) m |= (1u << a);
    return m;
}

}  // namespace

TorusGrid::TorusGrid(int n, std::vector<int> sizes, std::vector<double> spacings)
    : n_(n), sizes_(std::move(sizes)), spacings_(std::move(spacings)) {
    if (n_ < 1) throw std::invalid_argument("TorusGrid: dimension must be >= 1");
    if (n_ > 20) throw std::invalid_argument("TorusGrid: dimension too large");
    if (static_cast<int>(sizes_.size()) != n_ || static_cast<int>(spacings_.size()) != n_)
        throw std::invalid_argument("TorusGrid: sizes/spacings length must equal dimension");
    for (int i = 0; i < n_; ++i) {
        if (sizes_[i] < 3)
            throw std::invalid_argument("TorusGrid: sizes must be >= 3 (axis " + std::to_string(i) +
                                        " has " + std::to_string(sizes_[i]) + ")");
        if (!(spacings_[i] > 0.0))
            throw std::invalid_argument("TorusGrid: spacings must be > 0");
    }

    strides_.assign(n_, 1);
    for (int i = n_ - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * sizes_[i + 1];
    num_vertices_ = strides_[0] * sizes_[0];

    cell_volume_ = 1.0;
    for (double h : spacings_) cell_volume_ *= h;

    // Enumerate all ascending axis subsets per degree, lexicographically.
    axis_sets_.assign(n_ + 1, {});
    rank_by_mask_.assign(n_ + 1, std::vector<int>(1u << n_, -1));
    std::vector<int> subset;
    auto recurse = [&](auto&& self, int start) -> void {
        int k = static_cast<int>(subset.size());
        rank_by_mask_[k][axes_mask(subset)] = static_cast<int>(axis_sets_[k].size());
        axis_sets_[k].push_back(subset);
        for (int a = start; a < n_; ++a) {
            subset.push_back(a);
            self(self, a + 1);
            subset.pop_back();
        }
    };
    recurse(recurse, 0);
}

Index TorusGrid::num_cells(int k) const {
    if (k < 0 || k > n_) return 0;
    return static_cast<Index>(axis_sets_[k].size()) * num_vertices_;
}

int TorusGrid::num_axis_sets(int k) const {
    if (k < 0 || k > n_) return 0;
    return static_cast<int>(axis_sets_[k].size());
}

const std::vector<int>& TorusGrid::axis_set(int k, int rank) const {
    return axis_sets_[k][rank];
}

int TorusGrid::axis_set_rank(const std::vector<int>& axes) const {
    int k = static_cast<int>(axes.size());
    int r = rank_by_mask_[k][axes_mask(axes)];
    if (r < 0) throw std::invalid_argument("TorusGrid: invalid axis set");
    return r;
}

Index TorusGrid::vertex_id(const std::vector<int>& coords) const {
    Index v = 0;
    for (int i = 0; i < n_; ++i) v += static_cast<Index>(wrap(coords[i], sizes_[i])) * strides_[i];
    return v;
}

std::vector<int> TorusGrid::vertex_coords(Index v) const {
    std::vector<int> c(n_);
    for (int i = 0; i < n_; ++i) {
        c[i] = static_cast<int>(v / strides_[i]);
        v %= strides_[i];
    }
    return c;
}

Index TorusGrid::vertex_shift(Index v, int axis, int steps) const {
    Index stride = strides_[axis];
    int N = sizes_[axis];
    int coord = static_cast<int>((v / stride) % N);
    int moved = wrap(coord + steps, N);
    return v + static_cast<Index>(moved - coord) * stride;
}

Cell TorusGrid::cell(int k, Index id) const {
    if (k < 0 || k > n_ || id < 0 || id >= num_cells(k))
        throw std::invalid_argument("TorusGrid: cell id out of range");
    Cell c;
    c.axes = axis_sets_[k][static_cast<int>(id / num_vertices_)];
    c.base = vertex_coords(id % num_vertices_);
    return c;
}

Index TorusGrid::cell_id(const Cell& c) const {
    validate_cell(c);
    int rank = axis_set_rank(c.axes);
    return static_cast<Index>(rank) * num_vertices_ + vertex_id(c.base);
}

void TorusGrid::validate_cell(const Cell& c) const {
    if (static_cast<int>(c.base.size()) != n_)
        throw std::invalid_argument("TorusGrid: cell base has wrong dimension");
    int prev = -1;
    for (int a : c.axes) {
        if (a <= prev || a >= n_)
            throw std::invalid_argument("TorusGrid: cell axes must be strictly increasing and in range");
        prev = a;
    }
    for (int i = 0; i < n_; ++i)
        if (c.base[i] < 0 || c.base[i] >= sizes_[i])
            throw std::invalid_argument("TorusGrid: cell base out of range");
}

std::vector<TorusGrid::Face> TorusGrid::boundary_faces(const Cell& c) const {
    validate_cell(c);
    int k = c.degree();
    std::vector<Face> faces;
    if (k == 0) return faces;
    faces.reserve(2 * static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        int axis = c.axes[j];
        int sign_far = (j % 2 == 0) ? 1 : -1;
        Cell face;
        face.axes.reserve(k - 1);
        for (int a : c.axes)
            if (a != axis) face.axes.push_back(a);
        face.base = c.base;
        faces.push_back(Face{face, -sign_far, axis, false});
        face.base[axis] = wrap(c.base[axis] + 1, sizes_[axis]);
        faces.push_back(Face{std::move(face), sign_far, axis, true});
    }
    return faces;
}

std::vector<std::pair<Cell, int>> TorusGrid::boundary(const Cell& c) const {
    std::vector<std::pair<Cell, int>> out;
    for (auto& f : boundary_faces(c)) out.emplace_back(std::move(f.cell), f.sign);
    return out;
}

double TorusGrid::primal_volume(const Cell& c) const {
    double v = 1.0;
    for (int a : c.axes) v *= spacings_[a];
    return v;
}

double TorusGrid::dual_volume(const Cell& c) const {
    double v = 1.0;
    std::uint32_t mask = axes_mask(c.axes);
    for (int i = 0; i < n_; ++i)
        if (!(mask & (1u << i))) v *= spacings_[i];
    return v;
}

std::pair<double, double> TorusGrid::volumes(const Cell& c) const {
    validate_cell(c);
    return {primal_volume(c), dual_volume(c)};
}

double TorusGrid::total_volume() const {
    return cell_volume_ * static_cast<double>(num_vertices_);
}

bool TorusGrid::same_shape(const TorusGrid& other) const {
    return n_ == other.n_ && sizes_ == other.sizes_ && spacings_ == other.spacings_;
}

}  // namespace covforms
