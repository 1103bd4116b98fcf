#include "burgers/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace burgers {
namespace {

double abs_pow(double d, double p) {
    const double a = std::abs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    if (p == 0.5) return std::sqrt(a);
    if (p == 3.0) return a * a * a;
    if (p == 4.0) return (a * a) * (a * a);
    return std::pow(a, p);
}

void check_layer(std::size_t n_points, std::size_t k, double M) {
    if (k == 0) throw std::invalid_argument("energy spectrum: k must be >= 1");
    if (!(M >= 1.0)) throw std::invalid_argument("energy spectrum: M must be >= 1");
    if (!(M * static_cast<double>(k) < static_cast<double>(n_points) / 2.0)) {
        throw std::invalid_argument("energy spectrum: need M k < N/2");
    }
}

// Positive integers n with k/M <= n <= M k.
std::pair<std::size_t, std::size_t> layer_bounds(std::size_t k, double M) {
    const double kd = static_cast<double>(k);
    const auto lo = static_cast<std::size_t>(std::ceil(kd / M - 1e-12));
    const auto hi = static_cast<std::size_t>(std::floor(M * kd + 1e-12));
    return {std::max<std::size_t>(lo, 1), hi};
}

double layer_mean(std::span<const double> power, std::size_t k, double M) {
    const auto [lo, hi] = layer_bounds(k, M);
    double sum = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) sum += power[n];
    // Both signs: the sum doubles and so does the count.
    return sum / static_cast<double>(hi - lo + 1);
}

}  // namespace

double structure_function_points(const Field& u, double p, std::size_t shift) {
    if (!(p >= 0.0)) throw std::invalid_argument("structure function: p must be >= 0");
    if (p == 0.0) return 1.0;
    const auto v = u.physical();
    const std::size_t n = v.size();
    shift %= n;
    if (shift == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + shift < n ? i + shift : i + shift - n;
        sum += abs_pow(v[j] - v[i], p);
    }
    return sum / static_cast<double>(n);
}

double structure_function(const Field& u, double p, double ell) {
    return structure_function_points(u, p, u.grid().shift_points(ell));
}

double layer_average(std::span<const double> power, std::size_t n_points, std::size_t k, double M) {
    check_layer(n_points, k, M);
    return layer_mean(power, k, M);
}

double layer_energy(const Field& u, std::size_t k, double M) {
    check_layer(u.size(), k, M);
    std::vector<double> power(u.grid().modes());
    for (std::size_t n = 0; n < power.size(); ++n) power[n] = std::norm(u.spectral()[n]);
    return layer_mean(power, k, M);
}

double max_slope(const Field& u) {
    const Field ux = derivative(u, 1);
    const auto v = ux.physical();
    return *std::max_element(v.begin(), v.end());
}

double min_slope(const Field& u) {
    const Field ux = derivative(u, 1);
    const auto v = ux.physical();
    return *std::min_element(v.begin(), v.end());
}

double genericity_D(const Field& u0) {
    const double l1 = lp_norm(u0, 1.0);
    if (!(l1 > 0.0)) throw ZeroField("genericity_D: initial condition is identically zero");
    return std::max(1.0 / l1, wmp_norm(u0, {1, kInfinity}));
}

double kruzhkov_bound(double D, double sigma, double t) {
    if (t <= 0.0) return D;
    return std::min(D, 1.0 / (sigma * t));
}

double structure_function_alpha(std::span<const Field> samples, double p, double alpha, double ell) {
    if (samples.empty()) throw std::invalid_argument("structure_function_alpha: no samples");
    if (!(alpha >= 0.0)) throw std::invalid_argument("structure_function_alpha: alpha must be >= 0");
    double sum = 0.0;
    for (const auto& u : samples) sum += std::pow(structure_function(u, p, ell), alpha);
    return sum / static_cast<double>(samples.size());
}

double flatness(std::span<const Field> samples, double ell) {
    const double s2 = structure_function_alpha(samples, 2.0, 1.0, ell);
    if (s2 < 1e-14) throw DegenerateField("flatness: S_2 vanishes at this ell");
    return structure_function_alpha(samples, 4.0, 1.0, ell) / (s2 * s2);
}

double energy_spectrum(std::span<const Field> samples, std::size_t k, double M) {
    if (samples.empty()) throw std::invalid_argument("energy_spectrum: no samples");
    double sum = 0.0;
    for (const auto& u : samples) sum += layer_energy(u, k, M);
    return sum / static_cast<double>(samples.size());
}

RangePartition RangePartition::from_range_constant(double K, double nu) {
    if (!(K > 1.0)) throw std::invalid_argument("range constant K must exceed 1");
    const double k2 = 1.0 / (K * K);
    return RangePartition{nu, K, 0.25 * k2, k2 * k2 / 20.0, k2 / 6.0};
}

RangePartition RangePartition::with_constants(double nu, double c1, double c2) {
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("range constants must be positive");
    return RangePartition{nu, 0.0, c1, c2, c2 / c1};
}

bool RangePartition::valid() const noexcept {
    return c1 > 0.0 && c1 * nu0 <= c2 && c2 < 1.0 && nu > 0.0 && nu <= nu0 && c1 * nu < c2;
}

std::vector<std::size_t> DiagnosticsLayout::log_shifts(std::size_t n_points, double growth) {
    std::set<std::size_t> out;
    const std::size_t half = n_points / 2;
    for (double x = 1.0; x <= static_cast<double>(half) + 0.5; x *= growth) {
        out.insert(std::min(half, static_cast<std::size_t>(std::lround(x))));
    }
    out.insert(half);
    return {out.begin(), out.end()};
}

std::shared_ptr<const DiagnosticsLayout> DiagnosticsLayout::standard(std::size_t n_points) {
    auto layout = std::make_shared<DiagnosticsLayout>();
    layout->shifts = log_shifts(n_points);
    return layout;
}

std::size_t DiagnosticsLayout::p_index(double p) const {
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        if (std::abs(p_values[i] - p) < 1e-12) return i;
    }
    throw std::out_of_range("structure function order not tabulated");
}

double DiagnosticsRecord::norm(double m, double p) const {
    for (const auto& n : norms) {
        if (!n.fractional && n.index.m == m && n.index.p == p) return n.value;
    }
    std::ostringstream os;
    os << "norm (" << m << "," << p << ") not tabulated";
    throw std::out_of_range(os.str());
}

double DiagnosticsRecord::hs(double s) const {
    for (const auto& n : norms) {
        if (n.fractional && n.index.m == s) return n.value;
    }
    throw std::out_of_range("H^s norm not tabulated");
}

double DiagnosticsRecord::structure_at(double p, std::size_t shift_index) const {
    return structure[layout->p_index(p) * layout->shifts.size() + shift_index];
}

double DiagnosticsRecord::layer_energy(std::size_t k, double M) const {
    if (spectrum.empty()) throw std::logic_error("record has no stored spectrum");
    check_layer(n_points, k, M);
    return layer_mean(spectrum, k, M);
}

DiagnosticsRecord make_record(const TrajectoryState& state, std::size_t trajectory,
                              std::shared_ptr<const DiagnosticsLayout> layout) {
    const Field& u = state.u;
    DiagnosticsRecord r;
    r.t = state.t;
    r.trajectory = trajectory;
    r.n_points = u.size();
    r.budget = state.budget;
    r.tail_fraction = state.tail_fraction;

    const Field ux = derivative(u, 1);
    const Field uxx = derivative(u, 2);
    const auto slopes = ux.physical();
    const auto [mn, mx] = std::minmax_element(slopes.begin(), slopes.end());
    r.min_slope = *mn;
    r.max_slope = *mx;

    const auto add = [&](double m, double p, double v) { r.norms.push_back({{m, p}, false, v}); };
    add(0, 1, lp_norm(u, 1));
    add(0, 2, lp_norm(u, 2));
    add(0, kInfinity, lp_norm(u, kInfinity));
    add(1, 1, lp_norm(ux, 1));
    add(1, 2, lp_norm(ux, 2));
    add(1, kInfinity, lp_norm(ux, kInfinity));
    add(2, 1, lp_norm(uxx, 1));
    add(2, 2, lp_norm(uxx, 2));
    add(2, kInfinity, lp_norm(uxx, kInfinity));
    r.norms.push_back({{0.5, 2}, true, hs_norm(u, 0.5)});

    if (layout) {
        if (layout->keep_spectrum) {
            r.spectrum.resize(u.grid().modes());
            for (std::size_t k = 0; k < r.spectrum.size(); ++k) r.spectrum[k] = std::norm(u.spectral()[k]);
        }
        const auto& ps = layout->p_values;
        const auto& shifts = layout->shifts;
        r.structure.assign(ps.size() * shifts.size(), 0.0);
        const auto v = u.physical();
        const std::size_t n = v.size();
        std::vector<double> sums(ps.size());
        for (std::size_t s = 0; s < shifts.size(); ++s) {
            const std::size_t shift = shifts[s] % n;
            std::fill(sums.begin(), sums.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = i + shift < n ? i + shift : i + shift - n;
                const double d = v[j] - v[i];
                for (std::size_t q = 0; q < ps.size(); ++q) sums[q] += abs_pow(d, ps[q]);
            }
            for (std::size_t q = 0; q < ps.size(); ++q) {
                r.structure[q * shifts.size() + s] =
                    ps[q] == 0.0 ? 1.0 : (shift == 0 ? 0.0 : sums[q] / static_cast<double>(n));
            }
        }
    }
    r.layout = std::move(layout);
    return r;
}

bool in_typical_set(const DiagnosticsRecord& r, double K, double nu, OccupationVariant variant) {
    const double inv_k = 1.0 / K;
    const double sup = r.sup();
    if (!(inv_k <= sup && sup <= r.max_slope && r.max_slope <= K)) return false;
    const double steep = variant == OccupationVariant::L ? r.norm(1, kInfinity) : -r.min_slope;
    if (!(inv_k / nu <= steep && steep <= K / nu)) return false;
    return r.norm(2, kInfinity) <= K / (nu * nu);
}

double lk_occupation(std::span<const DiagnosticsRecord> records, double K, double nu,
                     OccupationVariant variant) {
    if (records.empty()) return 0.0;
    const auto hits = std::count_if(records.begin(), records.end(),
                                    [&](const auto& r) { return in_typical_set(r, K, nu, variant); });
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::optional<double> find_range_constant(std::span<const DiagnosticsRecord> records, double nu,
                                          double threshold, OccupationVariant variant, int k_min, int k_max) {
    for (int K = k_min; K <= k_max; ++K) {
        if (lk_occupation(records, K, nu, variant) >= threshold) return static_cast<double>(K);
    }
    return std::nullopt;
}

namespace {

struct TimeMean {
    double value;
    bool ok;
};

TimeMean time_mean(std::span<const DiagnosticsRecord> records, TimeWindow window, const Extractor& extract) {
    constexpr double tol = 1e-9;
    if (records.empty()) return {0.0, false};
    if (window.start < records.front().t - tol || window.end > records.back().t + tol ||
        window.end < window.start) {
        return {0.0, false};
    }
    double integral = 0.0, t_first = 0.0, t_last = 0.0, prev_t = 0.0, prev_v = 0.0, single = 0.0;
    std::size_t count = 0;
    for (const auto& r : records) {
        if (r.t < window.start - tol || r.t > window.end + tol) continue;
        const double v = extract(r);
        if (count == 0) {
            t_first = r.t;
            single = v;
        } else {
            integral += 0.5 * (v + prev_v) * (r.t - prev_t);
        }
        prev_t = r.t;
        prev_v = v;
        t_last = r.t;
        ++count;
    }
    if (count == 0) return {0.0, false};
    if (count == 1 || t_last <= t_first) return {single, true};
    return {integral / (t_last - t_first), true};
}

}  // namespace

BracketAverage bracket_average(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window,
                               const Extractor& extract) {
    if (ensemble.empty()) throw std::invalid_argument("bracket_average: empty ensemble");
    std::vector<double> means;
    means.reserve(ensemble.size());
    for (const auto& traj : ensemble) {
        const auto m = time_mean(traj, window, extract);
        if (!m.ok) throw std::invalid_argument("bracket_average: window outside the recorded span");
        means.push_back(m.value);
    }
    const double n = static_cast<double>(means.size());
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    const double err = means.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return BracketAverage{window, means.size(), mean, err};
}

BracketAverage bracket_average(std::span<const DiagnosticsRecord> records, TimeWindow window,
                               const Extractor& extract) {
    std::vector<std::vector<DiagnosticsRecord>> one{{records.begin(), records.end()}};
    return bracket_average(std::span<const std::vector<DiagnosticsRecord>>(one), window, extract);
}

TimeWindow deterministic_window(double D, double sigma, double c_tilde) {
    if (!(D > 0.0 && sigma > 0.0 && c_tilde > 0.0)) {
        throw std::invalid_argument("deterministic_window: D, sigma and C~ must be positive");
    }
    const double t1 = 0.25 / (D * D * c_tilde);
    const double t2 = std::max(1.5 * t1, 2.0 * D / sigma);
    return {t1, t2};
}

double estimate_c_tilde(std::span<const DiagnosticsRecord> records, double nu) {
    double sup = 0.0;
    for (const auto& r : records) sup = std::max(sup, nu * r.h1_squared());
    return sup;
}

}  // namespace burgers
