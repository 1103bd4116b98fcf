#pragma once

#include "burgers/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace burgers {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Derivative order m and integrability p of a W^{m,p} norm.
struct SobolevIndex {
    double m = 0.0;
    double p = 2.0;

    /// Viscosity exponent gamma = max(0, m - 1/p); 1/p = 0 for p = infinity.
    double gamma() const noexcept {
        const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
        return std::max(0.0, m - inv_p);
    }
};

/// A zero-mean real periodic function on the unit circle, held both as grid
/// samples and as Fourier coefficients u_hat(k) ~ int u(x) exp(-2 pi i k x) dx.
///
/// Fields are immutable. Both representations are computed on construction
/// and u_hat(0) is projected to zero, so the samples always have zero mean.
/// Only the half spectrum k = 0..N/2 is stored; negative k follow from
/// u_hat(-k) = conj(u_hat(k)).
class Field {
public:
    /// The zero field.
    explicit Field(Grid grid);

    static Field from_physical(Grid grid, std::vector<double> samples);
    /// Keeps the samples bit for bit and zeroes only u_hat(0); the sample
    /// mean is then zero up to rounding. Used for exact restarts.
    static Field from_samples(Grid grid, std::vector<double> samples);
    static Field from_spectral(Grid grid, std::vector<Complex> half_spectrum);

    /// Samples fn(x_j) and removes the mean.
    template <class Fn>
    static Field sample(Grid grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.x(j));
        return from_physical(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return data_->grid; }
    std::size_t size() const noexcept { return data_->grid.size(); }
    std::span<const double> physical() const noexcept { return data_->physical; }
    std::span<const Complex> spectral() const noexcept { return data_->spectral; }

    /// u_hat(k) for any integer k; zero outside (-N/2, N/2].
    Complex coefficient(long k) const noexcept;

    /// Arithmetic mean of the samples (zero up to rounding).
    double mean() const noexcept;

    Field operator+(const Field& other) const;
    Field operator-(const Field& other) const;
    Field operator*(double scale) const;
    Field operator-() const { return *this * -1.0; }

private:
    struct Data {
        Grid grid;
        std::vector<double> physical;
        std::vector<Complex> spectral;
    };
    explicit Field(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

inline Field operator*(double scale, const Field& f) { return f * scale; }

/// m-th derivative via multiplication by (2 pi i k)^m. The Nyquist mode is
/// dropped for odd m since it has no real-valued derivative on the grid.
Field derivative(const Field& f, unsigned m = 1);

/// |u|_p by the rectangle rule on the grid; p = infinity gives the grid max.
/// Throws std::invalid_argument for p < 1.
double lp_norm(const Field& f, double p);

/// |d^m u/dx^m|_p for integer m. Throws std::invalid_argument for
/// non-integer or negative m.
double wmp_norm(const Field& f, SobolevIndex index);

/// ||u||_s = (2 pi)^s (sum_k |k|^{2s} |u_hat(k)|^2)^{1/2}. Throws for s < 0.
double hs_norm(const Field& f, double s);

/// Increment form of the H^s norm for s in (0,1):
///   ( int_{S1} int_0^1 |u(x+l) - u(x)|^2 / l^{2s+1} dl dx )^{1/2},
/// with both integrals discretized on grid shifts l = j/N, j = 1..N.
/// Equivalent to hs_norm, not equal to it.
double hs_norm_increment(const Field& f, double s);

/// x -> u(x + ell); ell must be a grid multiple.
Field shift(const Field& f, double ell);
Field shift_points(const Field& f, std::size_t j);

/// Spectral interpolation onto another grid: modes are copied up to the
/// smaller Nyquist number (exclusive when truncating) and zero elsewhere.
Field resample(const Field& f, const Grid& target);

/// Sum over all k of |u_hat(k)|^2 (both signs).
double spectral_energy(const Field& f);

/// Real Fourier coefficients a_k = sqrt2 int cos(2 pi k x) u, b_k = sqrt2 int
/// sin(2 pi k x) u for k = 1..k_max, read off the spectrum.
struct RealCoefficients {
    std::vector<double> a;
    std::vector<double> b;
};
RealCoefficients real_coefficients(const Field& f, std::size_t k_max);

}  // namespace burgers
