#include "burgers/config.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace burgers {
namespace {

const char* law_name(CoefficientLaw law) { return law == CoefficientLaw::gaussian ? "gaussian" : "two_point"; }

CoefficientLaw parse_law(const std::string& s) {
    if (s == "gaussian") return CoefficientLaw::gaussian;
    if (s == "two_point") return CoefficientLaw::two_point;
    throw std::invalid_argument("unknown coefficient law '" + s + "'");
}

SpectralAmplitudes amplitudes_from_json(const Json& j) {
    if (j.contains("a")) {
        SpectralAmplitudes amps{j.at("a").get<std::vector<double>>(), j.value("b", std::vector<double>{})};
        if (amps.b.empty()) amps.b = amps.a;
        if (amps.a.size() != amps.b.size()) throw std::invalid_argument("forcing: a and b differ in length");
        return amps;
    }
    return SpectralAmplitudes::exponential(j.value("k_max", std::size_t{16}), j.value("rate", 0.7),
                                           j.value("scale", 1.0));
}

}  // namespace

Json forcing_to_json(const ForcingSpec& spec) {
    Json j;
    j["seed"] = spec.seed;
    if (spec.is_none()) {
        j["kind"] = "none";
        return j;
    }
    const SpectralAmplitudes& amps = *spec.amplitudes();
    j["kind"] = spec.is_kick() ? "kick" : "white";
    j["a"] = amps.a;
    j["b"] = amps.b;
    if (const auto* kick = std::get_if<KickForcing>(&spec.kind)) j["law"] = law_name(kick->law);
    return j;
}

ForcingSpec forcing_from_json(const Json& j) {
    ForcingSpec spec;
    spec.seed = j.value("seed", std::uint64_t{0});
    const std::string kind = j.value("kind", std::string("none"));
    if (kind == "none") {
        spec.kind = NoForcing{};
    } else if (kind == "kick") {
        spec.kind = KickForcing{amplitudes_from_json(j), parse_law(j.value("law", std::string("gaussian")))};
    } else if (kind == "white") {
        spec.kind = WhiteForcing{amplitudes_from_json(j)};
    } else {
        throw std::invalid_argument("unknown forcing kind '" + kind + "'");
    }
    return spec;
}

Json trajectory_to_json(const TrajectoryConfig& cfg) {
    return Json{
        {"nu", cfg.nu},
        {"n_points", cfg.grid.size()},
        {"flux", cfg.flux.name},
        {"forcing", forcing_to_json(cfg.forcing)},
        {"time_step", {{"adaptive", cfg.time_step.adaptive}, {"dt", cfg.time_step.dt}, {"cfl", cfg.time_step.cfl}}},
        {"t_end", cfg.t_end},
        {"record_interval", cfg.record_interval},
        {"trajectory", cfg.trajectory},
    };
}

TrajectoryConfig trajectory_from_json(const Json& j) {
    TrajectoryConfig cfg;
    cfg.nu = j.value("nu", cfg.nu);
    if (j.contains("n_points") && j.at("n_points").is_string()) {
        if (j.at("n_points").get<std::string>() != "auto") throw std::invalid_argument("n_points must be a number or \"auto\"");
        cfg.grid = Grid(resolution_for(cfg.nu));
    } else if (j.contains("n_points")) {
        cfg.grid = Grid(j.at("n_points").get<std::size_t>());
    } else {
        cfg.grid = Grid(resolution_for(cfg.nu));
    }
    if (j.contains("flux")) cfg.flux = parse_flux(j.at("flux").get<std::string>());
    if (j.contains("forcing")) cfg.forcing = forcing_from_json(j.at("forcing"));
    if (j.contains("time_step")) {
        const Json& ts = j.at("time_step");
        cfg.time_step.adaptive = ts.value("adaptive", cfg.time_step.adaptive);
        cfg.time_step.dt = ts.value("dt", cfg.time_step.dt);
        cfg.time_step.cfl = ts.value("cfl", cfg.time_step.cfl);
    }
    cfg.t_end = j.value("t_end", cfg.t_end);
    cfg.record_interval = j.value("record_interval", cfg.record_interval);
    cfg.trajectory = j.value("trajectory", cfg.trajectory);
    cfg.validate();
    return cfg;
}

void apply_overrides(Json& config, const std::vector<std::string>& overrides) {
    for (std::string item : overrides) {
        if (item.starts_with("--")) item.erase(0, 2);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string text = item.substr(eq + 1);
        Json value = Json::parse(text, nullptr, false);
        if (value.is_discarded()) value = text;

        Json* node = &config;
        std::size_t start = 0;
        while (true) {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty()) throw std::invalid_argument("override '" + item + "' has an empty key segment");
            if (!node->is_object() && !node->is_null()) {
                throw std::invalid_argument("override '" + item + "' descends into a non-object");
            }
            if (dot == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            start = dot + 1;
        }
    }
}

Field random_smooth_field(const Grid& grid, std::uint64_t seed, std::uint64_t trajectory, std::size_t k_max,
                          double rate, double amplitude) {
    if (3 * k_max > grid.size()) throw std::invalid_argument("random_smooth_field: k_max beyond N/3");
    const NoiseStream stream(seed, trajectory);
    auto engine = stream.engine(0, NoiseStream::Purpose::initial);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto amps = SpectralAmplitudes::exponential(k_max, rate);
    ForcingCoefficients c{std::vector<double>(k_max), std::vector<double>(k_max)};
    for (std::size_t k = 0; k < k_max; ++k) {
        c.cos_part[k] = normal(engine);
        c.sin_part[k] = normal(engine);
    }
    std::vector<Complex> spectrum(grid.modes());
    add_forcing_modes(amps, c, spectrum);
    const Field raw = Field::from_spectral(grid, std::move(spectrum));
    const double sup = lp_norm(raw, kInfinity);
    if (!(sup > 0.0)) return raw;
    return raw * (amplitude / sup);
}

Field InitialCondition::make(const Grid& grid, std::uint64_t seed, std::uint64_t trajectory) const {
    if (kind == "zero") return Field(grid);
    if (kind == "sine") {
        return Field::sample(grid, [a = amplitude](double x) { return a * std::sin(2.0 * std::numbers::pi * x); });
    }
    if (kind == "random") return random_smooth_field(grid, seed, trajectory, k_max, rate, amplitude);
    throw std::invalid_argument("unknown initial condition '" + kind + "'");
}

Json experiment_to_json(const ExperimentConfig& cfg) {
    return Json{
        {"trajectory", trajectory_to_json(cfg.trajectory)},
        {"initial",
         {{"kind", cfg.initial.kind},
          {"amplitude", cfg.initial.amplitude},
          {"k_max", cfg.initial.k_max},
          {"rate", cfg.initial.rate}}},
        {"ensemble_size", cfg.ensemble_size},
        {"burn_in", cfg.burn_in},
        {"window", cfg.window},
        {"p_values", cfg.p_values},
        {"shift_growth", cfg.shift_growth},
        {"keep_spectrum", cfg.keep_spectrum},
        {"output_dir", cfg.output_dir},
        {"seed", cfg.seed},
    };
}

ExperimentConfig experiment_from_json(const Json& j) {
    ExperimentConfig cfg;
    Json traj = j.value("trajectory", Json::object());
    if (j.contains("seed") && !j.at("seed").is_null()) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.seed_given = true;
        traj["forcing"]["seed"] = cfg.seed;
    }
    cfg.trajectory = trajectory_from_json(traj);
    if (j.contains("initial")) {
        const Json& ic = j.at("initial");
        if (ic.is_string()) {
            cfg.initial.kind = ic.get<std::string>();
        } else {
            cfg.initial.kind = ic.value("kind", cfg.initial.kind);
            cfg.initial.amplitude = ic.value("amplitude", cfg.initial.amplitude);
            cfg.initial.k_max = ic.value("k_max", cfg.initial.k_max);
            cfg.initial.rate = ic.value("rate", cfg.initial.rate);
        }
    }
    cfg.ensemble_size = j.value("ensemble_size", cfg.ensemble_size);
    cfg.burn_in = j.value("burn_in", cfg.burn_in);
    cfg.window = j.value("window", cfg.window);
    cfg.p_values = j.value("p_values", cfg.p_values);
    cfg.shift_growth = j.value("shift_growth", cfg.shift_growth);
    cfg.keep_spectrum = j.value("keep_spectrum", cfg.keep_spectrum);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (cfg.ensemble_size == 0) throw std::invalid_argument("ensemble_size must be positive");
    if (!(cfg.window >= 0.0)) throw std::invalid_argument("window must be >= 0");
    if (!(cfg.shift_growth > 1.0)) throw std::invalid_argument("shift_growth must exceed 1");
    return cfg;
}

}  // namespace burgers
