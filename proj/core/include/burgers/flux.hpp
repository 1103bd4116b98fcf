#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace burgers {

struct Interval {
    double lo = -10.0;
    double hi = 10.0;
};

/// Strongly convex flux f of u_t + f'(u) u_x = nu u_xx, with analytic
/// first and second derivatives.
struct FluxFunction {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    /// Lower bound on f'' over working_range.
    double sigma = 1.0;
    Interval working_range{};
    /// Optional polynomial growth exponents h(m), m = 0..m_max, with
    /// |f^(m)(x)| <= C_m (1+|x|)^h(m). Only h(1) is checked.
    std::vector<double> growth_exponents;

    /// Pointwise f over a batch; defaults to calling eval per point.
    void eval_many(std::span<const double> u, std::span<double> out) const;
    /// max |f'(u)| over the batch.
    double max_speed(std::span<const double> u) const;

    /// Set when f(u) = u^2/2 exactly; enables the solver's fast path.
    bool quadratic = false;
};

class ConvexityViolation : public std::runtime_error {
public:
    ConvexityViolation(double witness, double value);
    double witness() const noexcept { return witness_; }
    double value() const noexcept { return value_; }

private:
    double witness_;
    double value_;
};

/// f(u) = u^2/2.
FluxFunction classical_flux();

/// f(u) = u^2/2 + eps cos(u); sigma = 1 - |eps|. Requires |eps| < 1.
FluxFunction classical_plus_cos(double eps);

/// g(y) = f(y + b) - b y, the flux seen by u - b when u solves the f equation.
FluxFunction shifted_flux(const FluxFunction& f, double b);

/// Minimum of f'' over `samples` uniformly spaced points of the working range.
/// Throws ConvexityViolation at the first point where f'' <= 0.
double check_convexity(const FluxFunction& f, std::size_t samples = 100000);

/// Throws std::invalid_argument unless 1 <= h(1) < 2 when exponents are given.
void check_growth(const FluxFunction& f);

/// Parses "classical", "classical+cos:<eps>" or "shifted:<b>:<inner>".
FluxFunction parse_flux(std::string_view spec);

}  // namespace burgers
