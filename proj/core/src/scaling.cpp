#include "burgers/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace burgers {
namespace {

struct Ols {
    double slope, intercept, r2, slope_se;
};

Ols ols(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit: all abscissae coincide");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        sse += r * r;
    }
    const double r2 = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    const double se = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    return {slope, intercept, r2, se};
}

void require_points(std::size_t n) {
    if (n < 3) throw std::invalid_argument("fit needs at least 3 points");
}

void check_span(std::span<const double> nus) {
    if (nus.empty()) throw std::invalid_argument("sweep: no viscosities");
    const auto [lo, hi] = std::minmax_element(nus.begin(), nus.end());
    if (!(*lo > 0.0) || *hi < 4.0 * *lo * (1.0 - 1e-12)) {
        throw std::invalid_argument("sweep: viscosities must be positive and span a factor of 4");
    }
}

template <class Fn>
std::pair<std::vector<Point>, std::vector<std::pair<double, std::string>>> run_sweep(std::span<const double> nus,
                                                                                     const Fn& measure) {
    std::vector<Point> points;
    std::vector<std::pair<double, std::string>> failures;
    for (double nu : nus) {
        try {
            points.emplace_back(nu, measure(nu));
        } catch (const std::exception& e) {
            failures.emplace_back(nu, e.what());
        }
    }
    if (points.size() < 3) throw std::runtime_error("sweep: fewer than 3 viscosities survived");
    return {std::move(points), std::move(failures)};
}

void check_window(std::span<const std::vector<DiagnosticsRecord>> ensemble) {
    if (ensemble.empty() || ensemble.front().empty()) throw std::invalid_argument("average: empty ensemble");
}

}  // namespace

PowerLawFit fit_power_law(std::span<const Point> points) {
    require_points(points.size());
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("fit_power_law: coordinates must be positive and finite");
        }
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const Ols f = ols(lx, ly);
    return {f.slope, std::exp(f.intercept), f.r2, f.slope_se, {points.begin(), points.end()}};
}

double fit_prefactor(std::span<const Point> points, double exponent) {
    if (points.empty()) throw std::invalid_argument("fit_prefactor: no points");
    double sum = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit_prefactor: coordinates must be positive");
        sum += std::log(y) - exponent * std::log(x);
    }
    return std::exp(sum / static_cast<double>(points.size()));
}

LinearFit fit_linear(std::span<const Point> points) {
    require_points(points.size());
    std::vector<double> x, y;
    for (const auto& [a, b] : points) {
        x.push_back(a);
        y.push_back(b);
    }
    const Ols f = ols(x, y);
    return {f.slope, f.intercept, f.r2, f.slope_se, {points.begin(), points.end()}};
}

LinearFit log_correction_fit(std::span<const Point> nu_values) {
    std::vector<Point> pts;
    for (const auto& [nu, v] : nu_values) {
        if (!(nu > 0.0)) throw std::invalid_argument("log_correction_fit: nu must be positive");
        pts.emplace_back(std::abs(std::log(nu)), v);
    }
    return fit_linear(pts);
}

SweepResult sobolev_exponent_sweep(std::span<const double> nus, const std::function<double(double)>& measure) {
    check_span(nus);
    auto [points, failures] = run_sweep(nus, measure);
    SweepResult r;
    r.fit = fit_power_law(points);
    r.points = std::move(points);
    r.failures = std::move(failures);
    return r;
}

LogCorrectionResult log_correction_check(std::span<const double> nus, const std::function<double(double)>& measure) {
    check_span(nus);
    auto [points, failures] = run_sweep(nus, measure);
    LogCorrectionResult r;
    r.fit = log_correction_fit(points);
    r.points = std::move(points);
    r.failures = std::move(failures);
    return r;
}

ScaleRange trim_log_range(ScaleRange range, double fraction, double floor) {
    if (!(fraction >= 0.0 && fraction < 0.5)) throw std::invalid_argument("trim fraction must be in [0, 1/2)");
    const bool open_below = range.lo < floor;
    const double lo = open_below ? floor : range.lo;
    const double hi = range.hi;
    if (!(hi > lo) || !(lo > 0.0)) return {lo, lo};
    const double ratio = std::pow(hi / lo, fraction);
    // lo is inclusive in the trimmed range when it is the floor itself.
    return {open_below ? lo * (1.0 - 1e-12) : lo * ratio, hi / ratio};
}

std::size_t StructureTable::p_index(double p) const {
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        if (std::abs(p_values[i] - p) < 1e-12) return i;
    }
    throw std::out_of_range("structure function order not tabulated");
}

StructureTable average_structure(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window) {
    check_window(ensemble);
    const auto& first = ensemble.front().front();
    if (!first.layout) throw std::invalid_argument("average_structure: records carry no layout");
    StructureTable table;
    table.n_points = first.n_points;
    table.shifts = first.layout->shifts;
    table.p_values = first.layout->p_values;
    table.values.resize(table.p_values.size() * table.shifts.size());
    for (std::size_t q = 0; q < table.p_values.size(); ++q) {
        for (std::size_t s = 0; s < table.shifts.size(); ++s) {
            const std::size_t idx = q * table.shifts.size() + s;
            table.values[idx] =
                bracket_average(ensemble, window, [idx](const DiagnosticsRecord& r) { return r.structure[idx]; })
                    .value;
        }
    }
    return table;
}

std::vector<PowerLawFit> structure_exponent_scan(const StructureTable& table, std::span<const double> p_values,
                                                 ScaleRange range, double edge_fraction) {
    const ScaleRange fit_range = trim_log_range(range, edge_fraction, 1.0 / static_cast<double>(table.n_points));
    std::vector<PowerLawFit> fits;
    for (double p : p_values) {
        const std::size_t q = table.p_index(p);
        std::vector<Point> pts;
        for (std::size_t s = 0; s < table.shifts.size(); ++s) {
            const double ell = table.ell(s);
            if (fit_range.contains(ell)) pts.emplace_back(ell, table.at(q, s));
        }
        if (pts.size() < 3) throw std::invalid_argument("structure_exponent_scan: range too narrow at this resolution");
        fits.push_back(fit_power_law(pts));
    }
    return fits;
}

PowerLawFit flatness_scan(const StructureTable& table, ScaleRange range, double edge_fraction) {
    const ScaleRange fit_range = trim_log_range(range, edge_fraction, 1.0 / static_cast<double>(table.n_points));
    const std::size_t q2 = table.p_index(2.0), q4 = table.p_index(4.0);
    std::vector<Point> pts;
    for (std::size_t s = 0; s < table.shifts.size(); ++s) {
        const double ell = table.ell(s);
        if (!fit_range.contains(ell)) continue;
        const double s2 = table.at(q2, s);
        if (s2 < 1e-14) throw DegenerateField("flatness_scan: S_2 vanishes inside the range");
        pts.emplace_back(ell, table.at(q4, s) / (s2 * s2));
    }
    if (pts.size() < 3) throw std::invalid_argument("flatness_scan: range too narrow at this resolution");
    return fit_power_law(pts);
}

std::vector<double> average_spectrum(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window) {
    check_window(ensemble);
    const std::size_t modes = ensemble.front().front().spectrum.size();
    if (modes == 0) throw std::invalid_argument("average_spectrum: records carry no spectrum");
    std::vector<double> out(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        out[k] = bracket_average(ensemble, window, [k](const DiagnosticsRecord& r) { return r.spectrum[k]; }).value;
    }
    return out;
}

PowerLawFit spectrum_scan(std::span<const double> mean_power, ScaleRange range, double M, double edge_fraction) {
    const std::size_t n_points = 2 * (mean_power.size() - 1);
    const ScaleRange fit_range = trim_log_range(range, edge_fraction, 1.0 / static_cast<double>(n_points));
    std::vector<Point> pts;
    for (std::size_t k = 1; static_cast<double>(k) * M < static_cast<double>(n_points) / 2.0; ++k) {
        const double ell = 1.0 / static_cast<double>(k);
        if (!fit_range.contains(ell)) continue;
        pts.emplace_back(static_cast<double>(k), layer_average(mean_power, n_points, k, M));
    }
    if (pts.size() < 3) throw std::invalid_argument("spectrum_scan: range too narrow at this resolution");
    return fit_power_law(pts);
}

}  // namespace burgers
