#pragma once

#include "burgers/solver.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace burgers {

using Json = nlohmann::json;

/// Forcing block: {"kind": "none"|"kick"|"white", "k_max", "rate", "scale",
/// "law": "gaussian"|"two_point", "seed"} or explicit "a"/"b" arrays.
Json forcing_to_json(const ForcingSpec& spec);
ForcingSpec forcing_from_json(const Json& j);

/// Trajectory block. "n_points" may be "auto" (resolution rule for nu).
Json trajectory_to_json(const TrajectoryConfig& cfg);
TrajectoryConfig trajectory_from_json(const Json& j);

/// Applies "a.b.c=value" overrides in order. The value is parsed as JSON when
/// possible and kept as a string otherwise. Throws std::invalid_argument on
/// a malformed override.
void apply_overrides(Json& config, const std::vector<std::string>& overrides);

/// Initial-condition recipe: "zero", "sine" (sin 2 pi x), or "random"
/// (smooth random field drawn from the master seed and trajectory index).
struct InitialCondition {
    std::string kind = "zero";
    double amplitude = 1.0;
    std::size_t k_max = 8;
    double rate = 0.5;

    Field make(const Grid& grid, std::uint64_t seed, std::uint64_t trajectory) const;
};

/// sqrt2 sum_{k <= k_max} e^{-rate k} (A_k cos 2 pi k x + B_k sin 2 pi k x)
/// with standard normal A_k, B_k, rescaled so that |u|_inf = amplitude.
Field random_smooth_field(const Grid& grid, std::uint64_t seed, std::uint64_t trajectory, std::size_t k_max = 8,
                          double rate = 0.5, double amplitude = 1.0);

struct ExperimentConfig {
    TrajectoryConfig trajectory{};
    InitialCondition initial{};
    std::size_t ensemble_size = 1;
    /// Time discarded before averaging; negative means "choose automatically".
    double burn_in = -1.0;
    /// Averaging window length after burn-in.
    double window = 10.0;
    std::vector<double> p_values{0.5, 1.0, 2.0, 3.0, 4.0};
    double shift_growth = 1.1;
    bool keep_spectrum = true;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
};

Json experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const Json& j);

}  // namespace burgers
