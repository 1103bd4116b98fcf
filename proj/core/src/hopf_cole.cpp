#include "burgers/hopf_cole.hpp"

#include "burgers/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace burgers {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

Field primitive(const Field& u) {
    std::vector<Complex> s(u.spectral().begin(), u.spectral().end());
    s[0] = Complex{};
    for (std::size_t k = 1; k < s.size(); ++k) {
        s[k] /= Complex{0.0, kTwoPi * static_cast<double>(k)};
    }
    // The Nyquist mode of a real field has no real antiderivative on the grid.
    s.back() = Complex{};
    return Field::from_spectral(u.grid(), std::move(s));
}

Field hopf_cole_solve(const Field& u0, double nu, double t) {
    if (!(nu > 0.0)) throw std::invalid_argument("hopf_cole_solve: nu must be positive");
    if (!(t >= 0.0)) throw std::invalid_argument("hopf_cole_solve: t must be >= 0");
    if (nu < kHopfColeMinNu) {
        std::ostringstream os;
        os << "Hopf-Cole oracle refuses nu = " << nu << " < " << kHopfColeMinNu;
        throw DynamicRangeFailure(os.str());
    }
    const Grid& grid = u0.grid();
    const std::size_t n = grid.size();
    const Field h0 = primitive(u0);

    std::vector<double> exponent(n);
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        exponent[j] = -h0.physical()[j] / (2.0 * nu);
        shift = std::max(shift, exponent[j]);
    }
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j) phi[j] = std::exp(exponent[j] - shift);

    // Heat flow phi_t = nu phi_xx, exact per mode; keep the mean.
    std::vector<Complex> phat(grid.modes());
    fft::forward(phi, phat);
    const double c = 4.0 * std::numbers::pi * std::numbers::pi * nu * t;
    std::vector<Complex> dphat(grid.modes());
    for (std::size_t k = 0; k < phat.size(); ++k) {
        const double kk = static_cast<double>(k);
        phat[k] *= std::exp(-c * kk * kk);
        dphat[k] = phat[k] * Complex{0.0, kTwoPi * kk};
    }
    dphat.back() = Complex{};

    std::vector<double> phi_t(n), dphi_t(n);
    fft::inverse(phat, phi_t);
    fft::inverse(dphat, dphi_t);

    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(phi_t[j] > 0.0) || !std::isfinite(phi_t[j])) {
            std::ostringstream os;
            os << "Hopf-Cole: phi underflows at x = " << grid.x(j) << " (nu = " << nu << ", t = " << t << ")";
            throw DynamicRangeFailure(os.str());
        }
        u[j] = -2.0 * nu * dphi_t[j] / phi_t[j];
    }
    return Field::from_physical(grid, std::move(u));
}

}  // namespace burgers
