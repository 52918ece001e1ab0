#pragma once

/// @file cochain.hpp
/// Bundle-valued cochains: one fiber vector per k-cell, attached at the
/// cell's anchor vertex, plus the graded sum over all degrees.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "covforms/bundle.hpp"
#include "covforms/grid.hpp"

namespace covforms {

class Cochain {
public:
    Cochain() = default;
    /// Zero cochain of the given degree.
    Cochain(const TorusGrid& grid, int rank, int degree)
        : degree_(degree), values_(Eigen::MatrixXd::Zero(rank, grid.num_cells(degree))) {}
    Cochain(int degree, Eigen::MatrixXd values) : degree_(degree), values_(std::move(values)) {}

    int degree() const { return degree_; }
    int rank() const { return static_cast<int>(values_.rows()); }
    Index num_cells() const { return values_.cols(); }

    Eigen::MatrixXd& values() { return values_; }
    const Eigen::MatrixXd& values() const { return values_; }
    auto value(Index cell_id) { return values_.col(cell_id); }
    auto value(Index cell_id) const { return values_.col(cell_id); }

    bool matches(const TorusGrid& grid, const BundleData& b) const {
        return values_.rows() == b.rank() && values_.cols() == grid.num_cells(degree_);
    }

    Cochain& operator*=(double a) { values_ *= a; return *this; }
    Cochain& operator+=(const Cochain& o) { values_ += o.values_; return *this; }
    Cochain& operator-=(const Cochain& o) { values_ -= o.values_; return *this; }

private:
    int degree_ = 0;
    Eigen::MatrixXd values_;
};

/// Graded cochain: at most one component per degree 0..n, absent means zero.
class GradedCochain {
public:
    GradedCochain() = default;
    explicit GradedCochain(int dim) : comps_(dim + 1) {}

    int dim() const { return static_cast<int>(comps_.size()) - 1; }
    bool has(int k) const { return k >= 0 && k <= dim() && comps_[k].has_value(); }
    const Cochain& at(int k) const { return *comps_[k]; }
    Cochain& at(int k) { return *comps_[k]; }
    void set(Cochain c) {
        comps_.at(c.degree()) = std::move(c);
    }
    void clear(int k) { comps_[k].reset(); }

    /// Adds a * x into this, materializing absent components.
    void axpy(double a, const GradedCochain& x, const TorusGrid& grid, const BundleData& b);
    GradedCochain& operator*=(double a);

    bool matches(const TorusGrid& grid, const BundleData& b) const;

private:
    std::vector<std::optional<Cochain>> comps_;
};

/// Deterministic pseudo-random cochain, entries uniform in
/// [-amplitude, amplitude), reproducible from the seed.
Cochain random_cochain(const TorusGrid& grid, const BundleData& b, int degree, std::uint64_t seed,
                       double amplitude);

/// Random graded cochain with every degree 0..n populated; the per-degree
/// streams are decorrelated from the same seed.
GradedCochain random_graded_cochain(const TorusGrid& grid, const BundleData& b, std::uint64_t seed,
                                    double amplitude);

}  // namespace covforms
