#pragma once

#include "burgers/config.hpp"
#include "burgers/diagnostics.hpp"
#include "burgers/scaling.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace burgers {

struct TrajectoryRun {
    std::size_t index = 0;
    std::vector<DiagnosticsRecord> records;
    std::optional<TrajectoryState> final_state;
    /// Empty on success.
    std::string error;

    bool ok() const noexcept { return error.empty(); }
};

struct EnsembleArchive {
    ExperimentConfig config;
    double burn_in = 0.0;
    /// Span covered by the kept records.
    TimeWindow window{};
    std::vector<TrajectoryRun> runs;

    std::size_t survivors() const;
    /// Records of the successful trajectories, in trajectory order.
    std::vector<std::vector<DiagnosticsRecord>> surviving_records() const;
};

struct EnsembleOptions {
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned workers = 0;
    /// Called (serialized) with every kept state.
    std::function<void(std::size_t trajectory, const TrajectoryState&)> on_state;
};

struct BurnInEstimate {
    /// sup_t of the pilot-ensemble mean of |u|_2^2.
    double c_prime = 0.0;
    double i0 = 0.0;
    /// (C' + 1) / I_0.
    double t0 = 0.0;
    /// max(20, 2 t0); 0 for unforced runs.
    double burn_in = 0.0;
};

/// Pilot of `pilot_trajectories` runs over [0, pilot_time] from cfg.initial.
BurnInEstimate estimate_burn_in(const ExperimentConfig& cfg, double pilot_time = 10.0,
                                std::size_t pilot_trajectories = 2);

/// Runs cfg.ensemble_size trajectories (trajectory index i, initial
/// condition cfg.initial for index i) over [0, burn_in + window] and keeps
/// the records with t >= burn_in. A negative cfg.burn_in is replaced by
/// estimate_burn_in(cfg). Failed trajectories are recorded; throws
/// std::runtime_error when fewer than half survive.
EnsembleArchive run_ensemble(const ExperimentConfig& cfg, const EnsembleOptions& options = {});

/// Continues every surviving trajectory of `previous` from its final state
/// (resampled onto cfg's grid) for `relax + cfg.window` time units, keeping
/// records from start + relax on. Budgets restart at zero.
EnsembleArchive continue_ensemble(const ExperimentConfig& cfg, const EnsembleArchive& previous, double relax,
                                  const EnsembleOptions& options = {});

std::shared_ptr<const DiagnosticsLayout> layout_for(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Viscosity sweeps
// ---------------------------------------------------------------------------

struct SweepConfig {
    /// Template for every level; nu and the grid are set per level.
    ExperimentConfig base;
    std::vector<double> nus{4e-3, 2e-3, 1e-3, 5e-4};
    /// Time between the branch point and the first kept record.
    double relax = 1.0;
    double points_per_unit_nu = 4.0;
};

struct SweepLevel {
    double nu = 0.0;
    EnsembleArchive archive;
};

/// Levels in decreasing nu. One ensemble is burned in at the largest nu;
/// every trajectory then branches into all levels, resampled onto each
/// level's grid, and the branches run in lockstep on the same forcing
/// realization (integrate_lockstep). Records start `relax` after the branch
/// point, so all levels share one averaging window. on_level fires once all
/// levels are done; options.on_state is not used.
std::vector<SweepLevel> run_sweep(const SweepConfig& cfg, const EnsembleOptions& options = {},
                                  const std::function<void(const SweepLevel&)>& on_level = {});

struct NamedExtractor {
    std::string name;
    Extractor extract;
};

/// h1_squared = ||u||_1^2, h_half_squared = ||u||_{1/2}^2, w1inf = |u|_{1,inf},
/// sup = |u|_inf, l2_squared = |u|_2^2.
std::vector<NamedExtractor> standard_quantities();

struct QuantityEstimate {
    double nu = 0.0;
    std::string quantity;
    double value = 0.0;
    double stderr_ = 0.0;
};

/// Bracket of each quantity at each level over the level's window.
std::vector<QuantityEstimate> sweep_brackets(std::span<const SweepLevel> levels,
                                             std::span<const NamedExtractor> quantities);

/// Power-law fit against nu of one quantity's brackets.
PowerLawFit fit_quantity(std::span<const QuantityEstimate> estimates, const std::string& quantity);

// ---------------------------------------------------------------------------
// Stationary regime
// ---------------------------------------------------------------------------

/// Reservoir of post-burn-in snapshots taken at least `interval` apart along
/// each trajectory. When full, every second snapshot of each trajectory is
/// dropped and the interval doubles.
class EmpiricalMeasure {
public:
    struct Sample {
        std::size_t trajectory;
        double t;
        Field u;
    };

    explicit EmpiricalMeasure(double interval = 1.0, std::size_t capacity = 512);

    /// Stores u when t is at least one interval after this trajectory's
    /// previous sample. Returns whether it was stored.
    bool offer(std::size_t trajectory, double t, const Field& u);

    std::size_t size() const noexcept { return samples_.size(); }
    double interval() const noexcept { return interval_; }
    std::size_t capacity() const noexcept { return capacity_; }
    std::span<const Sample> samples() const noexcept { return samples_; }

private:
    void thin();

    double interval_;
    std::size_t capacity_;
    std::vector<Sample> samples_;
    std::vector<double> next_time_;
    std::vector<double> origin_;
};

/// Mean and standard error of `observable` over the reservoir. Throws
/// std::invalid_argument with fewer than 30 samples.
BracketAverage stationary_average(const EmpiricalMeasure& measure, const std::function<double(const Field&)>& observable);

struct BalanceReport {
    /// 2 nu {||u||_1^2}.
    double dissipation_rate = 0.0;
    double dissipation_stderr = 0.0;
    /// I_0 per unit time; 0 for unforced runs.
    double injection_rate = 0.0;
    /// dissipation_rate / injection_rate, 0 when unforced.
    double ratio = 0.0;
    bool quasi_stationary = false;
};

BalanceReport quasi_stationary_check(const EnsembleArchive& archive);

// ---------------------------------------------------------------------------
// Pathwise experiments
// ---------------------------------------------------------------------------

struct CouplingPoint {
    double t = 0.0;
    double distance = 0.0;
};

/// Steps two solutions with the same forcing realization in lockstep (common
/// dt, common noise counters) and reports |u_a - u_b|_1 at t = 0 and at every
/// record time.
std::vector<CouplingPoint> coupling_decay(const TrajectoryConfig& cfg, const Field& u0_a, const Field& u0_b);

struct OraclePoint {
    double t = 0.0;
    double l2_error = 0.0;
};

/// Unforced classical-flux run against the Hopf-Cole solution at each time.
std::vector<OraclePoint> oracle_validate(const TrajectoryConfig& cfg, const Field& u0, std::span<const double> times);

struct KruzhkovReport {
    double D = 0.0;
    /// max over records (t > 0 included, t = 0 against D) of
    /// max_slope / min(D, 1 / (sigma t)).
    double worst_ratio = 0.0;
    double worst_time = 0.0;
};

KruzhkovReport kruzhkov_check(const TrajectoryConfig& cfg, const Field& u0);

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

/// records.csv, one checkpoint per surviving trajectory and index.json.
void write_archive(const std::filesystem::path& dir, const EnsembleArchive& archive, const Json& extra = {});

/// CSV with a header row; values at full precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Same with preformatted cells.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Writes `manifest` as index.json in `dir`, listing `files`.
void write_index(const std::filesystem::path& dir, Json manifest, const std::vector<std::string>& files);

}  // namespace burgers
