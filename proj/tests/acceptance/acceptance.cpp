// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Pass criterion numbers as arguments
// to run a subset.

#include "burgers/config.hpp"
#include "burgers/experiments.hpp"
#include "burgers/fft.hpp"
#include "burgers/hopf_cole.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

using namespace burgers;

namespace {

using Clock = std::chrono::steady_clock;
using Ensemble = std::span<const std::vector<DiagnosticsRecord>>;

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240601;

// Sweep settings shared by criteria 4 to 8 and 11.
const std::vector<double> kSweepNus{4e-3, 2e-3, 1e-3, 5e-4};
constexpr std::size_t kSweepEnsemble = 16;
constexpr double kSweepWindow = 8.0;
constexpr double kSweepRelax = 1.0;
constexpr double kSweepRecordInterval = 0.25;
constexpr double kSpectrumNu = 1e-3;
constexpr double kFlatnessNu = 2e-3;
constexpr double kOccupationNu = 2e-3;

FitWindows fit_windows() { return FitWindows{}; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

Field sine(std::size_t n) {
    return Field::sample(Grid(n), [](double x) { return std::sin(2 * kPi * x); });
}

WhiteForcing default_white() { return WhiteForcing{SpectralAmplitudes::exponential()}; }

Outcome oracle_agreement() {
    const auto start = Clock::now();
    TrajectoryConfig c;
    c.nu = 1e-2;
    c.grid = Grid(1024);
    const std::vector<double> times{0.1, 0.5, 1.0};
    double worst = 0.0;
    for (const auto& p : oracle_validate(c, sine(1024), times)) worst = std::max(worst, p.l2_error);
    const double elapsed = seconds_since(start);
    return {worst < 1e-3 && elapsed < 10.0, fmt("max L2 error %.3e (< 1e-3), %.2f s (< 10 s)", worst, elapsed)};
}

Outcome kruzhkov() {
    const auto start = Clock::now();
    double worst = 0.0;
    std::string where;
    for (double nu : {1e-2, 2e-3}) {
        TrajectoryConfig c;
        c.nu = nu;
        c.grid = Grid(resolution_for(nu));
        c.t_end = 2.0;
        c.record_interval = 0.02;
        for (std::uint64_t i = 0; i < 20; ++i) {
            const Field u0 = random_smooth_field(c.grid, kSeed, i, 8, 0.5, 1.0);
            const KruzhkovReport r = kruzhkov_check(c, u0);
            if (r.worst_ratio > worst) {
                worst = r.worst_ratio;
                where = fmt("nu = %g, u0 #%d, t = %g", nu, static_cast<int>(i), r.worst_time);
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {worst <= 1.05 && elapsed < 120.0,
            fmt("max u_x / min(D, 1/(sigma t)) = %.4f (<= 1.05) at %s, %.1f s", worst, where.c_str(), elapsed)};
}

Outcome energy_identities() {
    const auto start = Clock::now();
    TrajectoryConfig c;
    c.nu = 1e-2;
    c.grid = Grid(resolution_for(c.nu));
    c.t_end = 5.0;
    const Field u0 = random_smooth_field(c.grid, kSeed, 0, 8, 0.5, 1.0);
    const TrajectoryState end = integrate(c, u0, nullptr);
    const double lost = std::pow(lp_norm(u0, 2), 2) - std::pow(lp_norm(end.u, 2), 2);
    const double closure = std::abs(end.budget.dissipated - lost) / lost;

    ExperimentConfig w;
    w.trajectory.nu = 2e-2;
    w.trajectory.grid = Grid(resolution_for(w.trajectory.nu));
    w.trajectory.forcing.kind = default_white();
    w.trajectory.forcing.seed = kSeed;
    w.trajectory.record_interval = 0.25;
    w.ensemble_size = 8;
    w.window = 100.0;
    const EnsembleArchive archive = run_ensemble(w);
    const BalanceReport balance = quasi_stationary_check(archive);
    const double elapsed = seconds_since(start);
    return {closure <= 0.01 && balance.quasi_stationary && elapsed < 300.0,
            fmt("unforced budget off by %.2e (<= 1%%); 2 nu {|u|_1^2} / I0 = %.4f (in [0.85, 1.15]) after burn-in %g; "
                "%.1f s",
                closure, balance.ratio, archive.burn_in, elapsed)};
}

struct SweepData {
    std::vector<SweepLevel> levels;
    std::vector<QuantityEstimate> estimates;
    double seconds = 0.0;

    const SweepLevel& level(double nu) const {
        for (const auto& l : levels) {
            if (std::abs(l.nu - nu) < 1e-12) return l;
        }
        throw std::out_of_range("no sweep level at this nu");
    }
};

const SweepData& sweep() {
    static std::optional<SweepData> data;
    if (data) return *data;
    const auto start = Clock::now();
    SweepConfig sc;
    sc.base.trajectory.forcing.kind = default_white();
    sc.base.trajectory.forcing.seed = kSeed;
    sc.base.trajectory.record_interval = kSweepRecordInterval;
    sc.base.ensemble_size = kSweepEnsemble;
    sc.base.window = kSweepWindow;
    sc.nus = kSweepNus;
    sc.relax = kSweepRelax;
    data.emplace();
    data->levels = run_sweep(sc);
    data->estimates = sweep_brackets(data->levels, standard_quantities());
    data->seconds = seconds_since(start);
    std::printf("       sweep over nu = 4e-3 .. 5e-4 (%zu trajectories, window %g) took %.0f s\n", kSweepEnsemble,
                kSweepWindow, data->seconds);
    for (const auto& e : data->estimates) {
        std::printf("       nu = %-7g %-15s %.5g +- %.2g\n", e.nu, e.quantity.c_str(), e.value, e.stderr_);
    }
    std::fflush(stdout);
    return *data;
}

StructureTable structure_table(const SweepLevel& level) {
    const auto records = level.archive.surviving_records();
    return average_structure(Ensemble(records), level.archive.window);
}

Outcome sobolev_scaling() {
    const SweepData& s = sweep();
    const double h1 = fit_quantity(s.estimates, "h1_squared").exponent;
    const double w1 = fit_quantity(s.estimates, "w1inf").exponent;
    const double sup = fit_quantity(s.estimates, "sup").exponent;
    const bool ok = within(h1, -1.0, 0.15) && within(w1, -1.0, 0.2) && within(sup, 0.0, 0.1) && s.seconds < 7200.0;
    return {ok, fmt("{|u|_1^2} ~ nu^%.3f (-1 +- 0.15), {|u|_1,inf} ~ nu^%.3f (-1 +- 0.2), {|u|_inf} ~ nu^%.3f "
                    "(0 +- 0.1)",
                    h1, w1, sup)};
}

Outcome spectrum() {
    const SweepLevel& level = sweep().level(kSpectrumNu);
    const auto records = level.archive.surviving_records();
    const auto power = average_spectrum(Ensemble(records), level.archive.window);
    const PowerLawFit f = spectrum_scan(power, fit_windows().j2(kSpectrumNu), 1.0, fit_windows().edge_fraction);
    return {within(f.exponent, -2.0, 0.2) && f.r_squared >= 0.95,
            fmt("nu = %g: E(k) ~ k^%.3f (-2 +- 0.2), r2 = %.4f (>= 0.95), %zu modes", kSpectrumNu, f.exponent,
                f.r_squared, f.points.size())};
}

Outcome structure_functions() {
    const SweepData& s = sweep();
    const FitWindows w = fit_windows();
    const StructureTable table = structure_table(s.level(kSpectrumNu));
    const auto j2 = structure_exponent_scan(table, std::vector<double>{0.5, 2.0, 3.0}, w.j2(kSpectrumNu), w.edge_fraction);
    const auto j1 = structure_exponent_scan(table, std::vector<double>{2.0}, w.j1(kSpectrumNu), w.edge_fraction);
    std::vector<Point> prefactors;
    for (const auto& level : s.levels) {
        const auto fit = structure_exponent_scan(structure_table(level), std::vector<double>{2.0}, w.j1(level.nu),
                                                 w.edge_fraction);
        prefactors.emplace_back(level.nu, fit_prefactor(fit.front().points, 2.0));
    }
    const double pre = fit_power_law(prefactors).exponent;
    const bool ok = within(j2[0].exponent, 0.5, 0.15) && within(j2[1].exponent, 1.0, 0.15) &&
                    within(j2[2].exponent, 1.0, 0.2) && within(j1[0].exponent, 2.0, 0.2) && within(pre, -1.0, 0.25);
    return {ok, fmt("nu = %g, J2: S_1/2 ~ l^%.3f, S_2 ~ l^%.3f, S_3 ~ l^%.3f; J1: S_2 ~ l^%.3f; "
                    "J1 prefactor of S_2 ~ nu^%.3f",
                    kSpectrumNu, j2[0].exponent, j2[1].exponent, j2[2].exponent, j1[0].exponent, pre)};
}

Outcome flatness() {
    const FitWindows w = fit_windows();
    const PowerLawFit f = flatness_scan(structure_table(sweep().level(kFlatnessNu)), w.j2(kFlatnessNu), w.edge_fraction);
    return {within(f.exponent, -1.0, 0.3), fmt("nu = %g: F(l) ~ l^%.3f (-1 +- 0.3) over J2", kFlatnessNu, f.exponent)};
}

Outcome log_correction() {
    std::vector<Point> pts;
    for (const auto& e : sweep().estimates) {
        if (e.quantity == "h_half_squared") pts.emplace_back(e.nu, e.value);
    }
    const LinearFit f = log_correction_fit(pts);
    return {f.slope > 0.0 && f.r_squared >= 0.9,
            fmt("{|u|_1/2^2} = %.3f |log nu| %+.3f, r2 = %.4f (slope > 0, r2 >= 0.9)", f.slope, f.intercept,
                f.r_squared)};
}

Outcome contraction() {
    TrajectoryConfig c;
    c.nu = 1e-2;
    c.grid = Grid(resolution_for(c.nu));
    c.forcing.kind = default_white();
    c.forcing.seed = kSeed;
    c.t_end = 200.0;
    c.record_interval = 1.0;
    double worst_increase = 0.0, worst_ratio = 0.0;
    for (std::uint64_t pair = 0; pair < 10; ++pair) {
        c.trajectory = pair;
        const auto series = coupling_decay(c, random_smooth_field(c.grid, kSeed, 2 * pair, 8, 0.5, 1.0),
                                           random_smooth_field(c.grid, kSeed, 2 * pair + 1, 8, 0.5, 1.0));
        for (std::size_t i = 1; i < series.size(); ++i) {
            worst_increase = std::max(worst_increase, series[i].distance - series[i - 1].distance);
        }
        worst_ratio = std::max(worst_ratio, series.back().distance / series.front().distance);
    }
    return {worst_increase <= 1e-6 && worst_ratio < 0.1,
            fmt("largest increase between records %.2e (<= 1e-6); worst |d(200)| / |d(0)| = %.3e (< 0.1)",
                worst_increase, worst_ratio)};
}

Outcome exact_identities() {
    const auto start = Clock::now();
    const std::size_t n = 1024;
    const Grid grid(n);
    double parseval = 0.0, wk = 0.0, chain = 0.0, round_trip = 0.0, mean = 0.0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const Field u = random_smooth_field(grid, kSeed, i, 32, 0.2, 1.0);
        const double l2 = std::pow(lp_norm(u, 2), 2);
        parseval = std::max(parseval, std::abs(l2 - spectral_energy(u)) / l2);

        for (std::size_t j : {1u, 17u, 256u, 500u}) {
            const double y = static_cast<double>(j) / n;
            const double lhs = std::pow(lp_norm(shift_points(u, j) - u, 2), 2);
            double rhs = 0.0;
            for (long k = 1; k <= static_cast<long>(n / 2); ++k) {
                const double weight = k == static_cast<long>(n / 2) ? 1.0 : 2.0;
                rhs += 4.0 * weight * std::pow(std::sin(kPi * k * y), 2) * std::norm(u.coefficient(k));
            }
            wk = std::max(wk, std::abs(lhs - rhs) / rhs);
        }

        const double norms[] = {lp_norm(u, 1),          lp_norm(u, kInfinity),        wmp_norm(u, {1, 1}),
                                wmp_norm(u, {1, kInfinity}), wmp_norm(u, {2, 1}), wmp_norm(u, {2, kInfinity})};
        for (std::size_t k = 1; k < std::size(norms); ++k) {
            chain = std::max(chain, (norms[k - 1] - norms[k]) / norms[k]);
        }

        std::vector<Complex> spec(grid.modes());
        std::vector<double> back(n);
        fft::forward(u.physical(), spec);
        fft::inverse(spec, back);
        const double scale = lp_norm(u, kInfinity);
        for (std::size_t j = 0; j < n; ++j) round_trip = std::max(round_trip, std::abs(back[j] - u.physical()[j]) / scale);
    }
    TrajectoryConfig c;
    c.nu = 1e-2;
    c.grid = Grid(512);
    c.forcing.kind = default_white();
    c.forcing.seed = kSeed;
    c.t_end = 2.0;
    integrate(c, random_smooth_field(c.grid, kSeed, 0), [&](const TrajectoryState& s) {
        mean = std::max(mean, std::abs(s.u.mean()) / lp_norm(s.u, kInfinity));
    });
    const double elapsed = seconds_since(start);
    const bool ok = parseval <= 1e-10 && wk <= 1e-10 && chain <= 1e-8 && round_trip <= 1e-10 && mean <= 1e-10 &&
                    elapsed < 10.0;
    return {ok, fmt("Parseval %.1e, Wiener-Khinchin %.1e, round trip %.1e, mean drift %.1e (<= 1e-10); norm chain "
                    "violation %.1e (<= 1e-8); %.2f s",
                    parseval, wk, round_trip, mean, std::max(chain, 0.0), elapsed)};
}

Outcome occupation() {
    const SweepLevel& level = sweep().level(kOccupationNu);
    std::vector<DiagnosticsRecord> all;
    for (const auto& traj : level.archive.surviving_records()) all.insert(all.end(), traj.begin(), traj.end());
    const auto K = find_range_constant(all, kOccupationNu, 0.05, OccupationVariant::O, 2, 64);
    if (!K) return {false, fmt("nu = %g: no K <= 64 reaches O_K occupation 0.05", kOccupationNu)};
    return {true, fmt("nu = %g: K = %g gives O_K occupation %.3f (>= 0.05, K <= 64) over %zu records", kOccupationNu, *K,
                      lk_occupation(all, *K, kOccupationNu, OccupationVariant::O), all.size())};
}

struct Criterion {
    int number;
    const char* name;
    Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const Criterion criteria[] = {
        {1, "oracle agreement", oracle_agreement},
        {2, "Kruzhkov bound", kruzhkov},
        {3, "energy identities", energy_identities},
        {4, "Sobolev scaling", sobolev_scaling},
        {5, "energy spectrum", spectrum},
        {6, "structure functions", structure_functions},
        {7, "flatness", flatness},
        {8, "logarithmic correction", log_correction},
        {9, "L1 contraction", contraction},
        {10, "exact identities", exact_identities},
        {11, "occupation", occupation},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.number)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str());
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
