#pragma once

#include "burgers/field.hpp"

#include <stdexcept>

namespace burgers {

class DynamicRangeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Smallest viscosity the Hopf-Cole oracle accepts.
inline constexpr double kHopfColeMinNu = 1e-3;

/// Zero-mean antiderivative H with H' = u, via u_hat(k) / (2 pi i k).
Field primitive(const Field& u);

/// Exact solution at time t of u_t + u u_x = nu u_xx (unforced, f = u^2/2).
///
/// phi0 = exp(-H0/(2 nu) - c), with c the maximum of -H0/(2 nu) so that
/// max phi0 = 1, is evolved by the heat equation mode by mode and
/// u = -2 nu phi_x / phi. Throws DynamicRangeFailure when nu < 1e-3 or when
/// phi loses positivity on the grid.
Field hopf_cole_solve(const Field& u0, double nu, double t);

}  // namespace burgers
