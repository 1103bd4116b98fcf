#include "burgers/experiments.hpp"

#include "burgers/checkpoint.hpp"
#include "burgers/fft.hpp"
#include "burgers/hopf_cole.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace burgers {
namespace {

constexpr double kTimeTol = 1e-9;

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, const Fn& fn) {
    unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    w = static_cast<unsigned>(std::min<std::size_t>(w, n));
    if (w <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

TrajectoryRun run_trajectory(const ExperimentConfig& cfg, std::size_t index, TrajectoryState start, double t_end,
                             double keep_from, const std::shared_ptr<const DiagnosticsLayout>& layout,
                             const std::function<void(std::size_t, const TrajectoryState&)>& hook) {
    TrajectoryConfig tc = cfg.trajectory;
    tc.trajectory = index;
    tc.t_end = t_end;
    TrajectoryRun run;
    run.index = index;
    try {
        TrajectoryState final_state = integrate(tc, std::move(start), [&](const TrajectoryState& s) {
            if (s.t < keep_from - kTimeTol) return;
            run.records.push_back(make_record(s, index, layout));
            if (hook) hook(index, s);
        });
        run.final_state = std::move(final_state);
    } catch (const std::exception& e) {
        run.error = e.what();
        run.records.clear();
    }
    return run;
}

void finish_archive(EnsembleArchive& archive) {
    const std::size_t n = archive.runs.size();
    if (2 * archive.survivors() < n) {
        std::ostringstream os;
        os << "ensemble: only " << archive.survivors() << " of " << n << " trajectories survived";
        for (const auto& r : archive.runs) {
            if (!r.ok()) {
                os << "; first failure: " << r.error;
                break;
            }
        }
        throw std::runtime_error(os.str());
    }
    for (const auto& r : archive.runs) {
        if (r.ok() && !r.records.empty()) {
            archive.window = {r.records.front().t, r.records.back().t};
            break;
        }
    }
}

std::function<void(std::size_t, const TrajectoryState&)> serialized(const EnsembleOptions& options,
                                                                    std::mutex& mutex) {
    if (!options.on_state) return {};
    return [&options, &mutex](std::size_t i, const TrajectoryState& s) {
        std::lock_guard lock(mutex);
        options.on_state(i, s);
    };
}

double injection_rate(const ForcingSpec& forcing) {
    const auto* amps = forcing.amplitudes();
    return amps ? trace_constant(*amps, 0) : 0.0;
}

}  // namespace

std::size_t EnsembleArchive::survivors() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.ok(); }));
}

std::vector<std::vector<DiagnosticsRecord>> EnsembleArchive::surviving_records() const {
    std::vector<std::vector<DiagnosticsRecord>> out;
    for (const auto& r : runs) {
        if (r.ok()) out.push_back(r.records);
    }
    return out;
}

std::shared_ptr<const DiagnosticsLayout> layout_for(const ExperimentConfig& cfg) {
    auto layout = std::make_shared<DiagnosticsLayout>();
    layout->p_values = cfg.p_values;
    layout->shifts = DiagnosticsLayout::log_shifts(cfg.trajectory.grid.size(), cfg.shift_growth);
    layout->keep_spectrum = cfg.keep_spectrum;
    return layout;
}

BurnInEstimate estimate_burn_in(const ExperimentConfig& cfg, double pilot_time, std::size_t pilot_trajectories) {
    BurnInEstimate est;
    est.i0 = injection_rate(cfg.trajectory.forcing);
    if (!(est.i0 > 0.0)) return est;
    if (pilot_trajectories == 0) throw std::invalid_argument("estimate_burn_in: need at least one pilot trajectory");

    std::vector<std::vector<double>> energy(pilot_trajectories);
    parallel_for(pilot_trajectories, 0, [&](std::size_t i) {
        TrajectoryConfig tc = cfg.trajectory;
        tc.trajectory = i;
        tc.t_end = pilot_time;
        const Field u0 = cfg.initial.make(tc.grid, cfg.trajectory.forcing.seed, i);
        integrate(tc, u0, [&](const TrajectoryState& s) {
            const double l2 = lp_norm(s.u, 2.0);
            energy[i].push_back(l2 * l2);
        });
    });
    const std::size_t steps = std::min_element(energy.begin(), energy.end(), [](const auto& a, const auto& b) {
                                  return a.size() < b.size();
                              })->size();
    for (std::size_t j = 0; j < steps; ++j) {
        double mean = 0.0;
        for (const auto& e : energy) mean += e[j];
        est.c_prime = std::max(est.c_prime, mean / static_cast<double>(pilot_trajectories));
    }
    est.t0 = (est.c_prime + 1.0) / est.i0;
    est.burn_in = std::max(20.0, 2.0 * est.t0);
    return est;
}

EnsembleArchive run_ensemble(const ExperimentConfig& cfg, const EnsembleOptions& options) {
    cfg.trajectory.validate();
    EnsembleArchive archive;
    archive.config = cfg;
    archive.burn_in = cfg.burn_in >= 0.0 ? cfg.burn_in : estimate_burn_in(cfg).burn_in;
    archive.config.burn_in = archive.burn_in;
    const double t_end = archive.burn_in + cfg.window;
    const auto layout = layout_for(cfg);
    std::mutex hook_mutex;
    const auto hook = serialized(options, hook_mutex);

    archive.runs.resize(cfg.ensemble_size);
    parallel_for(cfg.ensemble_size, options.workers, [&](std::size_t i) {
        const Field u0 = cfg.initial.make(cfg.trajectory.grid, cfg.trajectory.forcing.seed, i);
        archive.runs[i] = run_trajectory(cfg, i, TrajectoryState{0.0, u0}, t_end, archive.burn_in, layout, hook);
    });
    finish_archive(archive);
    return archive;
}

EnsembleArchive continue_ensemble(const ExperimentConfig& cfg, const EnsembleArchive& previous, double relax,
                                  const EnsembleOptions& options) {
    cfg.trajectory.validate();
    if (!(relax >= 0.0)) throw std::invalid_argument("continue_ensemble: relax must be >= 0");
    std::vector<const TrajectoryRun*> sources;
    for (const auto& r : previous.runs) {
        if (r.ok() && r.final_state) sources.push_back(&r);
    }
    if (sources.empty()) throw std::invalid_argument("continue_ensemble: no surviving trajectories to continue");

    EnsembleArchive archive;
    archive.config = cfg;
    archive.burn_in = relax;
    const auto layout = layout_for(cfg);
    std::mutex hook_mutex;
    const auto hook = serialized(options, hook_mutex);

    archive.runs.resize(sources.size());
    parallel_for(sources.size(), options.workers, [&](std::size_t j) {
        const TrajectoryRun& src = *sources[j];
        TrajectoryState start = *src.final_state;
        start.u = resample(start.u, cfg.trajectory.grid);
        start.budget = {};
        const double t0 = start.t;
        archive.runs[j] = run_trajectory(cfg, src.index, std::move(start), t0 + relax + cfg.window, t0 + relax,
                                         layout, hook);
    });
    finish_archive(archive);
    return archive;
}

std::vector<SweepLevel> run_sweep(const SweepConfig& cfg, const EnsembleOptions& options,
                                  const std::function<void(const SweepLevel&)>& on_level) {
    std::vector<double> nus = cfg.nus;
    if (nus.empty()) throw std::invalid_argument("run_sweep: no viscosities");
    if (!(cfg.relax >= 0.0)) throw std::invalid_argument("run_sweep: relax must be >= 0");
    std::sort(nus.begin(), nus.end(), std::greater<>());

    std::vector<SweepLevel> levels(nus.size());
    std::vector<TrajectoryConfig> members;
    std::vector<std::shared_ptr<const DiagnosticsLayout>> layouts;
    for (std::size_t l = 0; l < nus.size(); ++l) {
        ExperimentConfig level_cfg = cfg.base;
        level_cfg.trajectory.nu = nus[l];
        level_cfg.trajectory.grid = Grid(resolution_for(nus[l], cfg.points_per_unit_nu));
        level_cfg.trajectory.validate();
        levels[l].nu = nus[l];
        levels[l].archive.config = level_cfg;
        members.push_back(level_cfg.trajectory);
        layouts.push_back(layout_for(level_cfg));
    }

    ExperimentConfig burn = levels.front().archive.config;
    burn.window = 0.0;
    const EnsembleArchive parent = run_ensemble(burn, {options.workers, nullptr});
    std::vector<const TrajectoryRun*> sources;
    for (const auto& r : parent.runs) {
        if (r.ok() && r.final_state) sources.push_back(&r);
    }
    const double keep_from = parent.burn_in + cfg.relax;
    for (auto& level : levels) {
        level.archive.burn_in = keep_from;
        level.archive.config.burn_in = keep_from;
        level.archive.runs.resize(sources.size());
    }

    parallel_for(sources.size(), options.workers, [&](std::size_t j) {
        const TrajectoryRun& src = *sources[j];
        std::vector<TrajectoryConfig> tcs = members;
        std::vector<TrajectoryState> starts;
        for (auto& tc : tcs) {
            tc.trajectory = src.index;
            tc.t_end = keep_from + cfg.base.window;
            TrajectoryState start = *src.final_state;
            start.u = resample(start.u, tc.grid);
            start.budget = {};
            starts.push_back(std::move(start));
        }
        std::vector<TrajectoryRun> runs(tcs.size());
        for (auto& r : runs) r.index = src.index;
        try {
            auto finals = integrate_lockstep(tcs, std::move(starts), [&](std::size_t m, const TrajectoryState& s) {
                if (s.t < keep_from - kTimeTol) return;
                runs[m].records.push_back(make_record(s, src.index, layouts[m]));
            });
            for (std::size_t m = 0; m < runs.size(); ++m) runs[m].final_state = std::move(finals[m]);
        } catch (const std::exception& e) {
            for (auto& r : runs) {
                r.error = e.what();
                r.records.clear();
            }
        }
        for (std::size_t m = 0; m < runs.size(); ++m) levels[m].archive.runs[j] = std::move(runs[m]);
    });

    for (auto& level : levels) {
        finish_archive(level.archive);
        if (on_level) on_level(level);
    }
    return levels;
}

std::vector<NamedExtractor> standard_quantities() {
    return {
        {"h1_squared", [](const DiagnosticsRecord& r) { return r.h1_squared(); }},
        {"h_half_squared", [](const DiagnosticsRecord& r) { const double v = r.hs(0.5); return v * v; }},
        {"w1inf", [](const DiagnosticsRecord& r) { return r.norm(1, kInfinity); }},
        {"sup", [](const DiagnosticsRecord& r) { return r.sup(); }},
        {"l2_squared", [](const DiagnosticsRecord& r) { const double v = r.norm(0, 2); return v * v; }},
    };
}

std::vector<QuantityEstimate> sweep_brackets(std::span<const SweepLevel> levels,
                                             std::span<const NamedExtractor> quantities) {
    std::vector<QuantityEstimate> out;
    for (const auto& level : levels) {
        const auto records = level.archive.surviving_records();
        for (const auto& q : quantities) {
            const auto b = bracket_average(std::span<const std::vector<DiagnosticsRecord>>(records),
                                           level.archive.window, q.extract);
            out.push_back({level.nu, q.name, b.value, b.stderr_});
        }
    }
    return out;
}

PowerLawFit fit_quantity(std::span<const QuantityEstimate> estimates, const std::string& quantity) {
    std::vector<Point> pts;
    for (const auto& e : estimates) {
        if (e.quantity == quantity) pts.emplace_back(e.nu, e.value);
    }
    return fit_power_law(pts);
}

EmpiricalMeasure::EmpiricalMeasure(double interval, std::size_t capacity) : interval_(interval), capacity_(capacity) {
    if (!(interval > 0.0)) throw std::invalid_argument("EmpiricalMeasure: interval must be positive");
    if (capacity < 2) throw std::invalid_argument("EmpiricalMeasure: capacity must be at least 2");
}

bool EmpiricalMeasure::offer(std::size_t trajectory, double t, const Field& u) {
    if (trajectory >= next_time_.size()) {
        next_time_.resize(trajectory + 1, std::numeric_limits<double>::quiet_NaN());
        origin_.resize(trajectory + 1, std::numeric_limits<double>::quiet_NaN());
    }
    if (std::isnan(next_time_[trajectory])) {
        origin_[trajectory] = t;
    } else if (t < next_time_[trajectory] - kTimeTol) {
        return false;
    }
    samples_.push_back({trajectory, t, u});
    next_time_[trajectory] = t + interval_;
    if (samples_.size() > capacity_) thin();
    return true;
}

void EmpiricalMeasure::thin() {
    std::vector<Sample> kept;
    std::vector<double> last(next_time_.size(), std::numeric_limits<double>::quiet_NaN());
    for (auto& s : samples_) {
        const double slot = std::round((s.t - origin_[s.trajectory]) / interval_);
        if (std::fmod(slot, 2.0) == 0.0) {
            last[s.trajectory] = s.t;
            kept.push_back(std::move(s));
        }
    }
    interval_ *= 2.0;
    for (std::size_t i = 0; i < next_time_.size(); ++i) {
        if (!std::isnan(last[i])) next_time_[i] = last[i] + interval_;
    }
    samples_ = std::move(kept);
}

BracketAverage stationary_average(const EmpiricalMeasure& measure,
                                  const std::function<double(const Field&)>& observable) {
    const auto samples = measure.samples();
    if (samples.size() < 30) throw std::invalid_argument("stationary_average: need at least 30 samples");
    std::vector<double> values;
    values.reserve(samples.size());
    double t_lo = samples.front().t, t_hi = samples.front().t;
    for (const auto& s : samples) {
        values.push_back(observable(s.u));
        t_lo = std::min(t_lo, s.t);
        t_hi = std::max(t_hi, s.t);
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return BracketAverage{{t_lo, t_hi}, values.size(), mean, std::sqrt(var / (n - 1.0) / n)};
}

BalanceReport quasi_stationary_check(const EnsembleArchive& archive) {
    const double nu = archive.config.trajectory.nu;
    const auto records = archive.surviving_records();
    const auto b = bracket_average(std::span<const std::vector<DiagnosticsRecord>>(records), archive.window,
                                   [](const DiagnosticsRecord& r) { return r.h1_squared(); });
    BalanceReport report;
    report.dissipation_rate = 2.0 * nu * b.value;
    report.dissipation_stderr = 2.0 * nu * b.stderr_;
    report.injection_rate = injection_rate(archive.config.trajectory.forcing);
    if (report.injection_rate > 0.0) {
        report.ratio = report.dissipation_rate / report.injection_rate;
        report.quasi_stationary = report.ratio >= 0.85 && report.ratio <= 1.15;
    }
    return report;
}

std::vector<CouplingPoint> coupling_decay(const TrajectoryConfig& cfg, const Field& u0_a, const Field& u0_b) {
    if (!(u0_a.grid() == cfg.grid) || !(u0_b.grid() == cfg.grid)) {
        throw std::invalid_argument("coupling_decay: initial fields must live on the config grid");
    }
    const std::vector<TrajectoryConfig> pair{cfg, cfg};
    std::vector<TrajectoryState> starts{TrajectoryState{0.0, u0_a}, TrajectoryState{0.0, u0_b}};
    std::vector<CouplingPoint> out;
    std::optional<Field> first;
    integrate_lockstep(pair, std::move(starts), [&](std::size_t m, const TrajectoryState& s) {
        if (m == 0) {
            first = s.u;
            return;
        }
        out.push_back({s.t, lp_norm(*first - s.u, 1.0)});
    });
    return out;
}

std::vector<OraclePoint> oracle_validate(const TrajectoryConfig& cfg, const Field& u0, std::span<const double> times) {
    if (!cfg.forcing.is_none() || !cfg.flux.quadratic) {
        throw std::invalid_argument("oracle_validate: needs the unforced classical flux");
    }
    std::vector<double> sorted(times.begin(), times.end());
    std::sort(sorted.begin(), sorted.end());
    TrajectoryState state{0.0, u0};
    std::vector<OraclePoint> out;
    for (double t : sorted) {
        if (t > state.t) {
            TrajectoryConfig tc = cfg;
            tc.t_end = t;
            tc.record_interval = std::max(cfg.record_interval, t);
            state = integrate(tc, std::move(state), nullptr, {false});
        }
        const Field exact = hopf_cole_solve(u0, cfg.nu, t);
        out.push_back({t, lp_norm(state.u - exact, 2.0)});
    }
    return out;
}

KruzhkovReport kruzhkov_check(const TrajectoryConfig& cfg, const Field& u0) {
    if (!cfg.forcing.is_none()) throw std::invalid_argument("kruzhkov_check: needs an unforced run");
    KruzhkovReport report;
    report.D = genericity_D(u0);
    integrate(cfg, u0, [&](const TrajectoryState& s) {
        const double bound = kruzhkov_bound(report.D, cfg.flux.sigma, s.t);
        const double ratio = max_slope(s.u) / bound;
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_time = s.t;
        }
    });
    return report;
}

std::string format_number(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_index(const std::filesystem::path& dir, Json manifest, const std::vector<std::string>& files) {
    manifest["files"] = files;
    std::ofstream out(dir / "index.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "index.json").string());
    out << manifest.dump(2) << '\n';
}

void write_archive(const std::filesystem::path& dir, const EnsembleArchive& archive, const Json& extra) {
    std::filesystem::create_directories(dir);
    std::vector<std::vector<double>> rows;
    for (const auto& run : archive.runs) {
        for (const auto& r : run.records) {
            rows.push_back({static_cast<double>(r.trajectory), r.t, r.norm(0, 1), r.norm(0, 2), r.norm(0, kInfinity),
                            r.norm(1, 1), r.norm(1, 2), r.norm(1, kInfinity), r.norm(2, 2), r.norm(2, kInfinity),
                            r.hs(0.5), r.max_slope, r.min_slope, r.budget.dissipated, r.budget.injected,
                            r.budget.injected_expected, r.tail_fraction});
        }
    }
    std::vector<std::string> files{"records.csv"};
    write_csv(dir / "records.csv",
              {"trajectory", "t", "l1", "l2", "linf", "w11", "h1", "w1inf", "w22", "w2inf", "h_half", "max_slope",
               "min_slope", "dissipated", "injected", "injected_expected", "tail_fraction"},
              rows);

    Json runs = Json::array();
    for (const auto& run : archive.runs) {
        Json entry{{"index", run.index}, {"ok", run.ok()}, {"records", run.records.size()}};
        if (!run.ok()) entry["error"] = run.error;
        if (run.final_state) {
            const std::string base = "final_" + std::to_string(run.index);
            TrajectoryConfig tc = archive.config.trajectory;
            tc.trajectory = run.index;
            save_checkpoint(dir / base, tc, *run.final_state);
            files.push_back(base + ".brg");
            files.push_back(base + ".json");
            entry["checkpoint"] = base;
        }
        runs.push_back(std::move(entry));
    }
    Json manifest{
        {"kind", "ensemble"},
        {"config", experiment_to_json(archive.config)},
        {"burn_in", archive.burn_in},
        {"window", {archive.window.start, archive.window.end}},
        {"trajectories", runs},
    };
    if (extra.is_object()) {
        for (const auto& [key, value] : extra.items()) manifest[key] = value;
    }
    write_index(dir, std::move(manifest), files);
}

}  // namespace burgers
