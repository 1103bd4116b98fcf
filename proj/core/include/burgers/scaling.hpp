#pragma once

#include "burgers/diagnostics.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace burgers {

using Point = std::pair<double, double>;

/// y ~ prefactor * x^exponent, fitted by least squares on (log x, log y).
struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
    /// Standard error of the slope; 0 with exactly 2 degrees of freedom lost.
    double exponent_stderr = 0.0;
    std::vector<Point> points;
};

/// Throws std::invalid_argument for fewer than 3 points or any nonpositive
/// coordinate.
PowerLawFit fit_power_law(std::span<const Point> points);

/// Prefactor c of y ~ c x^exponent with the exponent held fixed: the
/// geometric mean of y_i / x_i^exponent.
double fit_prefactor(std::span<const Point> points, double exponent);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    std::vector<Point> points;
};

/// Ordinary least squares y = slope x + intercept; at least 3 points.
LinearFit fit_linear(std::span<const Point> points);

/// Linear fit of value against |log nu| for (nu, value) points.
LinearFit log_correction_fit(std::span<const Point> nu_values);

/// Per-nu outcome of a sweep.
struct SweepResult {
    std::vector<Point> points;  ///< (nu, value) for the surviving runs
    std::vector<std::pair<double, std::string>> failures;
    PowerLawFit fit;
};

/// Calls `measure(nu)` for every nu, skips runs that throw, and fits the
/// survivors against nu. Throws std::invalid_argument when the nus span less
/// than a factor of 4, std::runtime_error when fewer than 3 runs survive.
SweepResult sobolev_exponent_sweep(std::span<const double> nus, const std::function<double(double)>& measure);

struct LogCorrectionResult {
    std::vector<Point> points;
    std::vector<std::pair<double, std::string>> failures;
    LinearFit fit;
};
LogCorrectionResult log_correction_check(std::span<const double> nus, const std::function<double(double)>& measure);

/// Sub-range left after dropping `fraction` of the log-width at each end.
/// A range reaching below `floor` (the smallest resolvable scale) starts at
/// `floor`, inclusive, and is trimmed at the upper end only.
ScaleRange trim_log_range(ScaleRange range, double fraction, double floor);

/// Practical fit windows J1 = (0, j1_hi nu] and J2 = (j2_lo nu, j2_hi]; the
/// band between them is left out of all fits.
struct FitWindows {
    double j1_hi = 1.0;
    double j2_lo = 40.0;
    double j2_hi = 0.25;
    double edge_fraction = 0.1;

    ScaleRange j1(double nu) const noexcept { return {0.0, j1_hi * nu}; }
    ScaleRange j2(double nu) const noexcept { return {j2_lo * nu, j2_hi}; }
};

/// Time- and ensemble-averaged structure functions on a fixed set of shifts.
struct StructureTable {
    std::size_t n_points = 0;
    std::vector<std::size_t> shifts;
    std::vector<double> p_values;
    /// Row-major [p][shift].
    std::vector<double> values;

    double ell(std::size_t shift_index) const { return static_cast<double>(shifts[shift_index]) / n_points; }
    double at(std::size_t p_index, std::size_t shift_index) const { return values[p_index * shifts.size() + shift_index]; }
    std::size_t p_index(double p) const;
};

/// Bracket of the tabulated S_p over the records that fall in `window`.
/// Requires every record to share the same layout.
StructureTable average_structure(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window);

/// Fits S_p(ell) vs ell over the shifts inside `range` after trimming
/// `edge_fraction` of its log-width at each end. Throws std::invalid_argument
/// when fewer than 3 shifts remain.
std::vector<PowerLawFit> structure_exponent_scan(const StructureTable& table, std::span<const double> p_values,
                                                 ScaleRange range, double edge_fraction = 0.1);

/// Fit of S_4 / S_2^2 vs ell over the trimmed range.
PowerLawFit flatness_scan(const StructureTable& table, ScaleRange range, double edge_fraction = 0.1);

/// Ensemble- and time-averaged |u_hat(n)|^2 for n = 0..N/2.
std::vector<double> average_spectrum(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window);

/// Fits the layer spectrum E(k), k integer with 1/k in `range` (trimmed),
/// against k.
PowerLawFit spectrum_scan(std::span<const double> mean_power, ScaleRange range, double M = 1.0,
                          double edge_fraction = 0.1);

}  // namespace burgers
