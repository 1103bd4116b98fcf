#include "burgers/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace burgers {

Grid::Grid(std::size_t n_points) : n_(n_points) {
    if (n_points < 8 || n_points % 2 != 0) {
        throw std::invalid_argument("Grid: n_points must be even and >= 8, got " +
                                    std::to_string(n_points));
    }
}

std::size_t Grid::shift_points(double ell) const {
    const double scaled = ell * static_cast<double>(n_);
    const double rounded = std::round(scaled);
    if (!std::isfinite(ell) || std::abs(scaled - rounded) > 1e-9) {
        throw std::invalid_argument("shift " + std::to_string(ell) +
                                    " is not a multiple of the grid spacing");
    }
    const auto n = static_cast<long long>(n_);
    long long j = static_cast<long long>(rounded) % n;
    if (j < 0) j += n;
    return static_cast<std::size_t>(j);
}

std::size_t resolution_for(double nu, double points_per_unit_nu, std::size_t min_points) {
    if (!(nu > 0.0)) throw std::invalid_argument("resolution_for: nu must be positive");
    const double wanted = std::ceil(points_per_unit_nu / nu);
    std::size_t n = 8;
    while (static_cast<double>(n) < wanted || n < min_points) n *= 2;
    return n;
}

}  // namespace burgers
