#pragma once

#include "burgers/field.hpp"
#include "burgers/solver.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace burgers {

class DegenerateField : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroField : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Single-field quantities
// ---------------------------------------------------------------------------

/// (1/N) sum_j |u(x_j + ell) - u(x_j)|^p for ell = j/N.
double structure_function(const Field& u, double p, double ell);
double structure_function_points(const Field& u, double p, std::size_t shift);

/// Mean of |u_hat(n)|^2 over the integer layer |n| in [k/M, M k], both signs.
/// Requires M k < N/2.
double layer_energy(const Field& u, std::size_t k, double M);
/// Same layer mean over a stored power table |u_hat(n)|^2, n = 0..N/2.
double layer_average(std::span<const double> power, std::size_t n_points, std::size_t k, double M);

/// max_x u_x on the grid, u_x by spectral differentiation.
double max_slope(const Field& u);
double min_slope(const Field& u);

/// D = max(|u0|_1^{-1}, |u0|_{1,inf}). Throws ZeroField for u0 == 0.
double genericity_D(const Field& u0);

/// Kruzhkov bound min(D, 1/(sigma t)); D alone at t = 0.
double kruzhkov_bound(double D, double sigma, double t);

// ---------------------------------------------------------------------------
// Averages over sets of fields
// ---------------------------------------------------------------------------

/// Mean over samples of structure_function(u, p, ell)^alpha. Throws
/// std::invalid_argument for an empty sample set or alpha < 0.
double structure_function_alpha(std::span<const Field> samples, double p, double alpha, double ell);

/// {S_4(ell)} / {S_2(ell)}^2. Throws DegenerateField when {S_2} < 1e-14.
double flatness(std::span<const Field> samples, double ell);

/// Mean over samples of layer_energy(u, k, M).
double energy_spectrum(std::span<const Field> samples, std::size_t k, double M);

// ---------------------------------------------------------------------------
// Scale ranges
// ---------------------------------------------------------------------------

struct ScaleRange {
    double lo = 0.0;  ///< exclusive
    double hi = 0.0;  ///< inclusive
    bool contains(double ell) const noexcept { return ell > lo && ell <= hi; }
    bool empty() const noexcept { return !(hi > lo); }
};

/// J1 = (0, C1 nu], J2 = (C1 nu, C2], J3 = (C2, 1].
struct RangePartition {
    double nu = 0.0;
    double K = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double nu0 = 0.0;

    /// C1 = K^-2/4, C2 = K^-4/20, nu0 = K^-2/6.
    static RangePartition from_range_constant(double K, double nu);
    /// Explicit constants; nu0 is set to c2/c1 (the largest nu keeping J2 nonempty).
    static RangePartition with_constants(double nu, double c1, double c2);

    ScaleRange j1() const noexcept { return {0.0, c1 * nu}; }
    ScaleRange j2() const noexcept { return {c1 * nu, c2}; }
    ScaleRange j3() const noexcept { return {c2, 1.0}; }

    /// C1 nu0 < C2 < 1 and nu <= nu0, so the three ranges are nonempty and disjoint.
    bool valid() const noexcept;
};

// ---------------------------------------------------------------------------
// Per-time records
// ---------------------------------------------------------------------------

/// What to tabulate at each record.
struct DiagnosticsLayout {
    std::vector<double> p_values{0.5, 1.0, 2.0, 3.0, 4.0};
    /// Grid shifts j (ell = j/N) at which structure functions are stored.
    std::vector<std::size_t> shifts;
    bool keep_spectrum = true;

    /// Log-thinned shifts 1..N/2 with ratio `growth` between neighbours.
    static std::vector<std::size_t> log_shifts(std::size_t n_points, double growth = 1.1);
    static std::shared_ptr<const DiagnosticsLayout> standard(std::size_t n_points);

    std::size_t p_index(double p) const;
};

struct NormValue {
    SobolevIndex index;
    bool fractional = false;  ///< true: hs_norm(index.m), p ignored
    double value = 0.0;
};

struct DiagnosticsRecord {
    double t = 0.0;
    std::size_t trajectory = 0;
    std::size_t n_points = 0;
    std::vector<NormValue> norms;
    double max_slope = 0.0;
    double min_slope = 0.0;
    /// |u_hat(k)|^2 for k = 0..N/2 (empty unless the layout keeps it).
    std::vector<double> spectrum;
    std::shared_ptr<const DiagnosticsLayout> layout;
    /// S_p at layout shifts, row-major [p_index][shift_index].
    std::vector<double> structure;
    EnergyBudget budget{};
    double tail_fraction = 0.0;

    /// Tabulated |u|_{m,p}; throws std::out_of_range if absent.
    double norm(double m, double p) const;
    /// Tabulated ||u||_s; throws std::out_of_range if absent.
    double hs(double s) const;
    /// |u|_inf, |u|_{1,inf}, |u|_{2,inf} and ||u||_1^2 shortcuts.
    double sup() const { return norm(0, kInfinity); }
    double h1_squared() const { const double v = norm(1, 2); return v * v; }
    double structure_at(double p, std::size_t shift_index) const;
    /// Layer-averaged spectrum at k from the stored |u_hat|^2.
    double layer_energy(std::size_t k, double M) const;
};

/// Computes every tabulated quantity of `state`.
DiagnosticsRecord make_record(const TrajectoryState& state, std::size_t trajectory,
                              std::shared_ptr<const DiagnosticsLayout> layout);

enum class OccupationVariant { L, O };

/// Whether a record satisfies the L_K (or O_K) conditions:
///   K^-1 <= |u|_inf <= max u_x <= K,
///   K^-1 nu^-1 <= |u|_{1,inf} <= K nu^-1      (L)
///   K^-1 nu^-1 <= -min u_x   <= K nu^-1      (O)
///   |u|_{2,inf} <= K nu^-2.
bool in_typical_set(const DiagnosticsRecord& r, double K, double nu, OccupationVariant variant);

/// Fraction of records in the typical set; 0 for an empty sequence.
double lk_occupation(std::span<const DiagnosticsRecord> records, double K, double nu,
                     OccupationVariant variant);

/// Smallest integer K in [k_min, k_max] whose occupation reaches `threshold`.
std::optional<double> find_range_constant(std::span<const DiagnosticsRecord> records, double nu,
                                          double threshold = 0.05, OccupationVariant variant = OccupationVariant::O,
                                          int k_min = 2, int k_max = 64);

// ---------------------------------------------------------------------------
// Brackets
// ---------------------------------------------------------------------------

struct TimeWindow {
    double start = 0.0;
    double end = 0.0;
};

struct BracketAverage {
    TimeWindow window{};
    std::size_t ensemble_size = 0;
    double value = 0.0;
    double stderr_ = 0.0;
};

using Extractor = std::function<double(const DiagnosticsRecord&)>;

/// Trapezoid time mean of `extract` over the records of each trajectory that
/// fall in `window`, then the mean over trajectories. stderr_ is the standard
/// error across trajectories (0 for a single trajectory). Throws
/// std::invalid_argument when the window is not inside the recorded span.
BracketAverage bracket_average(std::span<const std::vector<DiagnosticsRecord>> ensemble, TimeWindow window,
                               const Extractor& extract);
BracketAverage bracket_average(std::span<const DiagnosticsRecord> records, TimeWindow window,
                               const Extractor& extract);

/// [T1, T2] with T1 = D^-2 / (4 C~), T2 = max(3/2 T1, 2 D / sigma).
TimeWindow deterministic_window(double D, double sigma, double c_tilde);

/// sup over records of nu ||u(t)||_1^2, the empirical C~ with ||u||_1^2 <= C~/nu.
double estimate_c_tilde(std::span<const DiagnosticsRecord> records, double nu);

}  // namespace burgers
