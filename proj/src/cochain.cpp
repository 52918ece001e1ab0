#include "covforms/cochain.hpp"

#include <stdexcept>

#include "covforms/rng.hpp"

namespace covforms {

void GradedCochain::axpy(double a, const GradedCochain& x, const TorusGrid& grid,
                         const BundleData& b) {
    if (dim() != x.dim()) throw std::invalid_argument("GradedCochain: dimension mismatch");
    for (int k = 0; k <= dim(); ++k) {
        if (!x.has(k)) continue;
        if (!has(k)) set(Cochain(grid, b.rank(), k));
        at(k).values() += a * x.at(k).values();
    }
}

GradedCochain& GradedCochain::operator*=(double a) {
    for (int k = 0; k <= dim(); ++k)
        if (has(k)) at(k) *= a;
    return *this;
}

bool GradedCochain::matches(const TorusGrid& grid, const BundleData& b) const {
    if (dim() != grid.dim()) return false;
    for (int k = 0; k <= dim(); ++k)
        if (has(k) && !at(k).matches(grid, b)) return false;
    return true;
}

Cochain random_cochain(const TorusGrid& grid, const BundleData& b, int degree, std::uint64_t seed,
                       double amplitude) {
    if (degree < 0 || degree > grid.dim())
        throw std::invalid_argument("random_cochain: degree out of range");
    Rng rng(seed);
    Cochain c(grid, b.rank(), degree);
    for (Index id = 0; id < c.num_cells(); ++id)
        for (int i = 0; i < b.rank(); ++i) c.values()(i, id) = rng.symmetric(amplitude);
    return c;
}

GradedCochain random_graded_cochain(const TorusGrid& grid, const BundleData& b, std::uint64_t seed,
                                    double amplitude) {
    GradedCochain g(grid.dim());
    for (int k = 0; k <= grid.dim(); ++k)
        g.set(random_cochain(grid, b, k, seed * 0x10001ull + static_cast<std::uint64_t>(k) + 1,
                             amplitude));
    return g;
}

}  // namespace covforms
