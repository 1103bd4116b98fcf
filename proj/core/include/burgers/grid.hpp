#pragma once

#include <complex>
#include <cstddef>

namespace burgers {

using Complex = std::complex<double>;

/// Uniform periodic grid x_j = j/N on the unit circle.
class Grid {
public:
    /// Throws std::invalid_argument unless n_points is even and >= 8.
    explicit Grid(std::size_t n_points);

    std::size_t size() const noexcept { return n_; }
    /// Length of the half spectrum k = 0..N/2 stored by Field.
    std::size_t modes() const noexcept { return n_ / 2 + 1; }
    std::size_t nyquist() const noexcept { return n_ / 2; }
    double spacing() const noexcept { return 1.0 / static_cast<double>(n_); }
    double x(std::size_t j) const noexcept {
        return static_cast<double>(j) / static_cast<double>(n_);
    }

    /// Grid index of a shift ell = j/N. Throws std::invalid_argument when ell
    /// is not a grid multiple (to 1e-9 in units of the spacing).
    std::size_t shift_points(double ell) const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t n_;
};

/// Smallest power of two >= max(min_points, ceil(points_per_unit_nu / nu)).
std::size_t resolution_for(double nu, double points_per_unit_nu = 4.0,
                           std::size_t min_points = 256);

}  // namespace burgers
