// Command-line front end: every subcommand builds an experiment from a JSON
// config, --key=value overrides and a few subcommand flags, runs it and
// writes CSV tables plus an index.json manifest into the output directory.

#include "burgers/experiments.hpp"
#include "burgers/hopf_cole.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace burgers;

struct Common {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
};

void add_common(CLI::App* sub, Common& common) {
    sub->add_option("-c,--config", common.config_path, "JSON experiment config");
    sub->add_option("-o,--out", common.out_dir, "Output directory (overrides output_dir)");
    sub->add_option("--seed", common.seed, "Master seed; required for forced runs");
    sub->add_option("-j,--workers", common.workers, "Worker threads (0 = all cores)");
    sub->allow_extras();
}

Json load_config(const Common& common, const CLI::App* sub, Json defaults) {
    Json j = std::move(defaults);
    if (!common.config_path.empty()) {
        std::ifstream in(common.config_path);
        if (!in) throw std::runtime_error("cannot open config " + common.config_path);
        j.merge_patch(Json::parse(in));
    }
    apply_overrides(j, sub->remaining());
    if (common.seed) j["seed"] = *common.seed;
    if (!common.out_dir.empty()) j["output_dir"] = common.out_dir;
    return j;
}

ExperimentConfig experiment(const Common& common, const CLI::App* sub, Json defaults = Json::object()) {
    ExperimentConfig cfg = experiment_from_json(load_config(common, sub, std::move(defaults)));
    if (!cfg.trajectory.forcing.is_none() && !cfg.seed_given) {
        throw std::invalid_argument("--seed is required for forced (stochastic) runs");
    }
    return cfg;
}

std::filesystem::path prepare_out(const ExperimentConfig& cfg) {
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

Json fit_json(const PowerLawFit& f) {
    return {{"exponent", f.exponent},
            {"stderr", f.exponent_stderr},
            {"prefactor", f.prefactor},
            {"r_squared", f.r_squared},
            {"points", f.points.size()}};
}

std::vector<std::string> fit_row(const std::string& label, const PowerLawFit& f) {
    return {label, format_number(f.exponent), format_number(2.0 * f.exponent_stderr), format_number(f.r_squared)};
}

EnsembleOptions options_for(const Common& common) {
    EnsembleOptions o;
    o.workers = common.workers;
    return o;
}

int cmd_simulate(const Common& common, const CLI::App* sub) {
    const ExperimentConfig cfg = experiment(common, sub);
    const auto dir = prepare_out(cfg);
    const EnsembleArchive archive = run_ensemble(cfg, options_for(common));
    const BalanceReport balance = quasi_stationary_check(archive);
    Json extra{{"balance",
                {{"dissipation_rate", balance.dissipation_rate},
                 {"injection_rate", balance.injection_rate},
                 {"ratio", balance.ratio},
                 {"quasi_stationary", balance.quasi_stationary}}}};
    write_archive(dir, archive, extra);
    std::printf("%zu/%zu trajectories, burn-in %g, window [%g, %g]\n", archive.survivors(), archive.runs.size(),
                archive.burn_in, archive.window.start, archive.window.end);
    std::printf("2 nu {|u|_1^2} = %.6g, I0 = %.6g, ratio %.4f\n", balance.dissipation_rate, balance.injection_rate,
                balance.ratio);
    return 0;
}

int cmd_oracle(const Common& common, const CLI::App* sub, const std::vector<double>& times, double tolerance) {
    Json defaults{{"trajectory", {{"nu", 1e-2}, {"n_points", 1024}}}, {"initial", "sine"}};
    const ExperimentConfig cfg = experiment(common, sub, defaults);
    const auto dir = prepare_out(cfg);
    const Field u0 = cfg.initial.make(cfg.trajectory.grid, cfg.seed, 0);
    const auto points = oracle_validate(cfg.trajectory, u0, times);
    std::vector<std::vector<double>> rows;
    bool ok = true;
    for (const auto& p : points) {
        rows.push_back({p.t, p.l2_error});
        ok = ok && p.l2_error < tolerance;
        std::printf("t = %-6g |u - u_HC|_2 = %.3e\n", p.t, p.l2_error);
    }
    write_csv(dir / "oracle.csv", {"t", "l2_error"}, rows);
    write_index(dir, {{"kind", "oracle-validate"}, {"config", experiment_to_json(cfg)}, {"tolerance", tolerance}, {"pass", ok}},
                {"oracle.csv"});
    return ok ? 0 : 1;
}

int cmd_sweep(const Common& common, const CLI::App* sub, const std::vector<double>& nus, double relax,
              double points_per_nu, const FitWindows& windows) {
    Json defaults{{"trajectory", {{"forcing", {{"kind", "white"}}}, {"record_interval", 0.25}}},
                  {"ensemble_size", 16},
                  {"window", 8.0}};
    SweepConfig sc;
    sc.base = experiment(common, sub, defaults);
    sc.nus = nus;
    sc.relax = relax;
    sc.points_per_unit_nu = points_per_nu;
    const auto dir = prepare_out(sc.base);
    const auto levels = run_sweep(sc, options_for(common), [](const SweepLevel& l) {
        std::printf("nu = %g: %zu trajectories on N = %zu, window [%g, %g]\n", l.nu, l.archive.survivors(),
                    l.archive.config.trajectory.grid.size(), l.archive.window.start, l.archive.window.end);
        std::fflush(stdout);
    });

    const auto quantities = standard_quantities();
    const auto estimates = sweep_brackets(levels, quantities);
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : estimates) {
        rows.push_back({format_number(e.nu), e.quantity, format_number(e.value), format_number(e.stderr_)});
    }

    std::vector<std::vector<std::string>> fits;
    Json fit_summary;
    for (const auto& q : quantities) {
        const PowerLawFit f = fit_quantity(estimates, q.name);
        fits.push_back(fit_row(q.name, f));
        fit_summary[q.name] = fit_json(f);
    }
    std::vector<Point> hs;
    std::vector<Point> j1_prefactor;
    for (const auto& e : estimates) {
        if (e.quantity == "h_half_squared") hs.emplace_back(e.nu, e.value);
    }
    for (const auto& level : levels) {
        const auto records = level.archive.surviving_records();
        const auto table = average_structure(std::span<const std::vector<DiagnosticsRecord>>(records), level.archive.window);
        const auto j1 = structure_exponent_scan(table, std::vector<double>{2.0}, windows.j1(level.nu), windows.edge_fraction);
        j1_prefactor.emplace_back(level.nu, fit_prefactor(j1.front().points, 2.0));
        rows.push_back({format_number(level.nu), "s2_j1_prefactor", format_number(j1_prefactor.back().second), "0"});
    }
    const PowerLawFit pre = fit_power_law(j1_prefactor);
    fits.push_back(fit_row("s2_j1_prefactor", pre));
    fit_summary["s2_j1_prefactor"] = fit_json(pre);
    const LinearFit log_fit = log_correction_fit(hs);
    fit_summary["h_half_squared_vs_abs_log_nu"] = {{"slope", log_fit.slope}, {"intercept", log_fit.intercept},
                                                   {"r_squared", log_fit.r_squared}};

    write_csv(dir / "brackets.csv", {"nu", "quantity", "value", "stderr"}, rows);
    write_csv(dir / "fits.csv", {"quantity", "exponent", "ci", "r2"}, fits);
    {
        std::ofstream out(dir / "fits.json");
        out << fit_summary.dump(2) << '\n';
    }
    write_index(dir, {{"kind", "sweep"}, {"base", experiment_to_json(sc.base)}, {"nus", nus}, {"relax", relax},
                      {"points_per_unit_nu", points_per_nu}},
                {"brackets.csv", "fits.csv", "fits.json"});
    for (const auto& row : fits) std::printf("%-16s exponent %s (r2 %s)\n", row[0].c_str(), row[1].c_str(), row[3].c_str());
    std::printf("{|u|_1/2^2} vs |log nu|: slope %.4g, r2 %.4f\n", log_fit.slope, log_fit.r_squared);
    return 0;
}

int cmd_structure(const Common& common, const CLI::App* sub, const FitWindows& windows) {
    const ExperimentConfig cfg = experiment(common, sub);
    const auto dir = prepare_out(cfg);
    const EnsembleArchive archive = run_ensemble(cfg, options_for(common));
    const auto records = archive.surviving_records();
    const auto table = average_structure(std::span<const std::vector<DiagnosticsRecord>>(records), archive.window);
    const double nu = cfg.trajectory.nu;

    std::vector<std::vector<double>> rows;
    for (std::size_t q = 0; q < table.p_values.size(); ++q) {
        for (std::size_t s = 0; s < table.shifts.size(); ++s) rows.push_back({table.ell(s), table.p_values[q], table.at(q, s)});
    }
    write_csv(dir / "structure.csv", {"ell", "p", "S_p"}, rows);

    std::vector<std::vector<std::string>> fits;
    Json summary;
    const auto scan = [&](const std::string& label, ScaleRange range) {
        try {
            const auto f = structure_exponent_scan(table, table.p_values, range, windows.edge_fraction);
            for (std::size_t i = 0; i < f.size(); ++i) {
                const std::string name = label + "_p" + format_number(table.p_values[i]);
                fits.push_back(fit_row(name, f[i]));
                summary[name] = fit_json(f[i]);
            }
        } catch (const std::invalid_argument& e) {
            summary[label + "_error"] = e.what();
        }
    };
    scan("J1", windows.j1(nu));
    scan("J2", windows.j2(nu));
    try {
        const auto flat = flatness_scan(table, windows.j2(nu), windows.edge_fraction);
        fits.push_back(fit_row("J2_flatness", flat));
        summary["J2_flatness"] = fit_json(flat);
    } catch (const std::exception& e) {
        summary["flatness_error"] = e.what();
    }
    write_csv(dir / "fits.csv", {"quantity", "exponent", "ci", "r2"}, fits);
    write_index(dir, {{"kind", "structure"}, {"config", experiment_to_json(archive.config)}, {"fits", summary}},
                {"structure.csv", "fits.csv"});
    for (const auto& row : fits) std::printf("%-14s exponent %s (r2 %s)\n", row[0].c_str(), row[1].c_str(), row[3].c_str());
    return 0;
}

int cmd_spectrum(const Common& common, const CLI::App* sub, const FitWindows& windows, double M) {
    const ExperimentConfig cfg = experiment(common, sub);
    const auto dir = prepare_out(cfg);
    const EnsembleArchive archive = run_ensemble(cfg, options_for(common));
    const auto records = archive.surviving_records();
    const auto power = average_spectrum(std::span<const std::vector<DiagnosticsRecord>>(records), archive.window);
    const std::size_t n = cfg.trajectory.grid.size();
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 1; static_cast<double>(k) * M < static_cast<double>(n) / 2.0; ++k) {
        rows.push_back({static_cast<double>(k), layer_average(power, n, k, M)});
    }
    write_csv(dir / "spectrum.csv", {"k", "E"}, rows);
    const PowerLawFit f = spectrum_scan(power, windows.j2(cfg.trajectory.nu), M, windows.edge_fraction);
    write_index(dir, {{"kind", "spectrum"}, {"config", experiment_to_json(archive.config)}, {"M", M}, {"fit", fit_json(f)}},
                {"spectrum.csv"});
    std::printf("E(k) ~ k^%.4f over 1/k in J2 (r2 %.4f, %zu modes)\n", f.exponent, f.r_squared, f.points.size());
    return 0;
}

int cmd_occupation(const Common& common, const CLI::App* sub, double threshold, int k_max) {
    const ExperimentConfig cfg = experiment(common, sub);
    const auto dir = prepare_out(cfg);
    const EnsembleArchive archive = run_ensemble(cfg, options_for(common));
    std::vector<DiagnosticsRecord> all;
    for (const auto& traj : archive.surviving_records()) all.insert(all.end(), traj.begin(), traj.end());
    const double nu = cfg.trajectory.nu;
    std::vector<std::vector<double>> rows;
    for (int K = 2; K <= k_max; ++K) {
        rows.push_back({static_cast<double>(K), lk_occupation(all, K, nu, OccupationVariant::L),
                        lk_occupation(all, K, nu, OccupationVariant::O)});
    }
    write_csv(dir / "occupation.csv", {"K", "L_K", "O_K"}, rows);
    const auto K = find_range_constant(all, nu, threshold, OccupationVariant::O, 2, k_max);
    Json manifest{{"kind", "occupation"}, {"config", experiment_to_json(archive.config)}, {"threshold", threshold}};
    manifest["range_constant"] = K ? Json(*K) : Json(nullptr);
    std::optional<RangePartition> part;
    if (K) {
        part = RangePartition::from_range_constant(*K, nu);
        manifest["partition"] = {{"c1", part->c1}, {"c2", part->c2}, {"nu0", part->nu0},
                                 {"j1", {part->j1().lo, part->j1().hi}}, {"j2", {part->j2().lo, part->j2().hi}}};
    }
    write_index(dir, manifest, {"occupation.csv"});
    if (part) {
        std::printf("smallest K with O_K occupation >= %g: %g\n", threshold, *K);
        std::printf("J1 = (0, %.4g], J2 = (%.4g, %.4g], J3 = (%.4g, 1], nu0 = %.4g\n", part->j1().hi, part->j2().lo,
                    part->j2().hi, part->j3().lo, part->nu0);
    } else {
        std::printf("no K <= %d reaches O_K occupation %g\n", k_max, threshold);
    }
    return K ? 0 : 1;
}

int cmd_couple(const Common& common, const CLI::App* sub, std::size_t pairs) {
    Json defaults{{"trajectory", {{"nu", 1e-2}, {"forcing", {{"kind", "white"}}}, {"t_end", 200.0}, {"record_interval", 1.0}}},
                  {"initial", {{"kind", "random"}}}};
    const ExperimentConfig cfg = experiment(common, sub, defaults);
    const auto dir = prepare_out(cfg);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < pairs; ++i) {
        TrajectoryConfig tc = cfg.trajectory;
        tc.trajectory = i;
        const Field a = cfg.initial.make(tc.grid, cfg.seed, 2 * i);
        const Field b = cfg.initial.make(tc.grid, cfg.seed, 2 * i + 1);
        const auto series = coupling_decay(tc, a, b);
        for (const auto& p : series) rows.push_back({static_cast<double>(i), p.t, p.distance});
        std::printf("pair %zu: |u_a - u_b|_1 %.4g -> %.4g at t = %g\n", i, series.front().distance, series.back().distance,
                    series.back().t);
    }
    write_csv(dir / "coupling.csv", {"pair", "t", "distance"}, rows);
    write_index(dir, {{"kind", "couple"}, {"config", experiment_to_json(cfg)}, {"pairs", pairs}}, {"coupling.csv"});
    return 0;
}

int cmd_stationary(const Common& common, const CLI::App* sub, double interval) {
    Json defaults{{"trajectory", {{"nu", 2e-2}, {"forcing", {{"kind", "white"}}}, {"record_interval", 0.25}}},
                  {"ensemble_size", 4},
                  {"window", 100.0}};
    const ExperimentConfig cfg = experiment(common, sub, defaults);
    const auto dir = prepare_out(cfg);
    EmpiricalMeasure measure(interval);
    EnsembleOptions options = options_for(common);
    options.on_state = [&](std::size_t i, const TrajectoryState& s) { measure.offer(i, s.t, s.u); };
    const EnsembleArchive archive = run_ensemble(cfg, options);
    const auto records = archive.surviving_records();
    const auto balance = quasi_stationary_check(archive);

    Json observables;
    const auto compare = [&](const std::string& name, const std::function<double(const Field&)>& obs,
                             const Extractor& extract) {
        const auto mu = stationary_average(measure, obs);
        const auto bracket =
            bracket_average(std::span<const std::vector<DiagnosticsRecord>>(records), archive.window, extract);
        observables[name] = {{"measure", mu.value}, {"measure_stderr", mu.stderr_},
                             {"bracket", bracket.value}, {"bracket_stderr", bracket.stderr_}};
        std::printf("%-12s mu: %.5g +- %.2g   bracket: %.5g +- %.2g\n", name.c_str(), mu.value, mu.stderr_, bracket.value,
                    bracket.stderr_);
    };
    compare("l2_squared", [](const Field& u) { const double v = lp_norm(u, 2); return v * v; },
            [](const DiagnosticsRecord& r) { const double v = r.norm(0, 2); return v * v; });
    compare("h1_squared", [](const Field& u) { const double v = hs_norm(u, 1); return v * v; },
            [](const DiagnosticsRecord& r) { return r.h1_squared(); });
    compare("sup", [](const Field& u) { return lp_norm(u, kInfinity); }, [](const DiagnosticsRecord& r) { return r.sup(); });
    compare("w1inf", [](const Field& u) { return wmp_norm(u, {1, kInfinity}); },
            [](const DiagnosticsRecord& r) { return r.norm(1, kInfinity); });

    std::printf("balance 2 nu {|u|_1^2} / I0 = %.4f (%s)\n", balance.ratio,
                balance.quasi_stationary ? "quasi-stationary" : "not balanced");
    write_index(dir,
                {{"kind", "stationary"},
                 {"config", experiment_to_json(archive.config)},
                 {"samples", measure.size()},
                 {"sampling_interval", measure.interval()},
                 {"observables", observables},
                 {"balance", {{"ratio", balance.ratio}, {"quasi_stationary", balance.quasi_stationary}}}},
                {});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Burgers equation simulator and diagnostics"};
    app.require_subcommand(1);

    Common common;
    FitWindows windows;
    const auto add_windows = [&](CLI::App* sub) {
        sub->add_option("--j1-hi", windows.j1_hi, "J1 = (0, j1_hi nu]");
        sub->add_option("--j2-lo", windows.j2_lo, "J2 lower end in units of nu");
        sub->add_option("--j2-hi", windows.j2_hi, "J2 upper end");
    };

    auto* simulate = app.add_subcommand("simulate", "Run an ensemble and write its archive");
    add_common(simulate, common);

    std::vector<double> times{0.1, 0.5, 1.0};
    double tolerance = 1e-3;
    auto* oracle = app.add_subcommand("oracle-validate", "Compare the solver with the Hopf-Cole solution");
    add_common(oracle, common);
    oracle->add_option("--times", times, "Comparison times");
    oracle->add_option("--tolerance", tolerance, "L2 error tolerance");

    std::vector<double> nus{4e-3, 2e-3, 1e-3, 5e-4};
    double relax = 1.0;
    double points_per_nu = 4.0;
    auto* sweep = app.add_subcommand("sweep", "Viscosity sweep and exponent fits");
    add_common(sweep, common);
    add_windows(sweep);
    sweep->add_option("--nus", nus, "Viscosities");
    sweep->add_option("--relax", relax, "Settling time after each viscosity change");
    sweep->add_option("--points-per-nu", points_per_nu, "Resolution rule N >= points/nu");

    auto* structure = app.add_subcommand("structure", "Structure functions and their exponents");
    add_common(structure, common);
    add_windows(structure);

    double M = 1.0;
    auto* spectrum = app.add_subcommand("spectrum", "Layer-averaged energy spectrum");
    add_common(spectrum, common);
    add_windows(spectrum);
    spectrum->add_option("--layer", M, "Layer width M");

    double threshold = 0.05;
    int k_max = 64;
    auto* occupation = app.add_subcommand("occupation", "Occupation of the typical sets L_K and O_K");
    add_common(occupation, common);
    occupation->add_option("--threshold", threshold, "Occupation threshold");
    occupation->add_option("--k-max", k_max, "Largest K scanned");

    std::size_t pairs = 10;
    auto* couple = app.add_subcommand("couple", "L1 distance of solutions driven by the same force");
    add_common(couple, common);
    couple->add_option("--pairs", pairs, "Number of coupled pairs");

    double interval = 1.0;
    auto* stationary = app.add_subcommand("stationary", "Empirical stationary measure and energy balance");
    add_common(stationary, common);
    stationary->add_option("--sample-interval", interval, "Minimum time between stored snapshots");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*simulate) return cmd_simulate(common, simulate);
        if (*oracle) return cmd_oracle(common, oracle, times, tolerance);
        if (*sweep) return cmd_sweep(common, sweep, nus, relax, points_per_nu, windows);
        if (*structure) return cmd_structure(common, structure, windows);
        if (*spectrum) return cmd_spectrum(common, spectrum, windows, M);
        if (*occupation) return cmd_occupation(common, occupation, threshold, k_max);
        if (*couple) return cmd_couple(common, couple, pairs);
        if (*stationary) return cmd_stationary(common, stationary, interval);
    } catch (const DynamicRangeFailure& e) {
        std::cerr << "oracle refused: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
