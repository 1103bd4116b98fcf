#pragma once

#include "burgers/solver.hpp"

#include <filesystem>

namespace burgers {

/// A restartable point of a trajectory: `<base>.brg` holds the field in the
/// snapshot format and `<base>.json` the configuration, time, noise counters
/// and energy budget.
struct Checkpoint {
    TrajectoryConfig config;
    TrajectoryState state;
};

void save_checkpoint(const std::filesystem::path& base, const TrajectoryConfig& cfg, const TrajectoryState& state);

/// Throws std::runtime_error when either file is missing or inconsistent.
Checkpoint load_checkpoint(const std::filesystem::path& base);

}  // namespace burgers
