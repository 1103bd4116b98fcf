#pragma once

#include "burgers/field.hpp"
#include "burgers/flux.hpp"
#include "burgers/forcing.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace burgers {

struct TimeStepPolicy {
    /// When false every step uses `dt`; when true `dt` is only an upper bound
    /// and dt <= cfl * dx / max|f'(u)|.
    bool adaptive = true;
    double dt = 1e-2;
    double cfl = 0.5;
};

struct TrajectoryConfig {
    double nu = 1e-2;
    Grid grid{256};
    FluxFunction flux = classical_flux();
    ForcingSpec forcing{};
    TimeStepPolicy time_step{};
    double t_end = 1.0;
    double record_interval = 0.1;
    /// Selects the noise stream; distinct trajectories of an ensemble differ here.
    std::uint64_t trajectory = 0;

    /// Throws std::invalid_argument on nu <= 0, bad intervals, or a forcing
    /// band beyond N/3.
    void validate() const;
};

struct EnergyBudget {
    /// Energy removed by viscosity, 2 nu int ||u||_1^2 ds, summed exactly per step.
    double dissipated = 0.0;
    /// Pathwise energy added by kicks and white increments.
    double injected = 0.0;
    /// I_0 dt per white step (or I_0 per kick): the expected injection.
    double injected_expected = 0.0;
};

struct TrajectoryState {
    double t = 0.0;
    Field u;
    EnergyBudget budget{};
    /// Counter of white-noise steps taken; keys the next increment.
    std::uint64_t step_index = 0;
    /// Number of kicks applied so far; keys the next kick.
    std::uint64_t kick_index = 0;
    /// Fraction of |u|_2^2 in N/4 < |k| <= N/3 at the last record.
    double tail_fraction = 0.0;
};

class StabilityFailure : public std::runtime_error {
public:
    StabilityFailure(const std::string& what, TrajectoryState last_valid)
        : std::runtime_error(what), last_valid_(std::move(last_valid)) {}
    const TrajectoryState& last_valid() const noexcept { return last_valid_; }

private:
    TrajectoryState last_valid_;
};

/// Fraction of energy in the outer band N/4 < |k| <= N/3 of the retained modes.
double spectral_tail_fraction(const Field& u);
inline constexpr double kTailWarningThreshold = 1e-6;

/// One-step integrator for u_t + (f(u))_x = nu u_xx (+ forcing) on the grid.
///
/// A step is Strang-split: exact diffusion exp(-4 pi^2 nu k^2 dt/2) per mode,
/// a three-stage SSP Runge-Kutta step of the conservative flux term with the
/// 2/3 dealiasing mask, and another exact diffusion half step. The mean mode
/// is reset to zero after every step. A Stepper owns scratch buffers and must
/// not be shared between threads.
class Stepper {
public:
    explicit Stepper(TrajectoryConfig cfg);

    const TrajectoryConfig& config() const noexcept { return cfg_; }
    /// Largest retained wavenumber, floor(N/3).
    std::size_t cutoff() const noexcept { return cutoff_; }

    TrajectoryState step_deterministic(const TrajectoryState& state, double dt);
    /// Deterministic step followed by the white increment keyed on
    /// state.step_index.
    TrajectoryState step_stochastic(const TrajectoryState& state, double dt, const NoiseStream& stream);
    /// u <- u + zeta_{kick_index}; t is unchanged.
    TrajectoryState apply_kick(const TrajectoryState& state, const NoiseStream& stream);

    /// Time step allowed by the policy for a state with max|f'(u)| = speed.
    double allowed_dt(double speed) const noexcept;

    // Low-level interface on a masked half spectrum, used by integrate().

    /// Advances in place and returns max|f'(u)| seen at the first stage.
    double advance(std::vector<Complex>& uhat, double dt, EnergyBudget& budget);
    void add_white(std::vector<Complex>& uhat, std::uint64_t step_index, double dt,
                   const NoiseStream& stream, EnergyBudget& budget) const;
    void add_kick(std::vector<Complex>& uhat, std::uint64_t kick_index, const NoiseStream& stream,
                  EnergyBudget& budget) const;
    void apply_mask(std::vector<Complex>& uhat) const noexcept;

private:
    void diffuse(std::vector<Complex>& uhat, double dt, EnergyBudget& budget) const;
    double rhs(const std::vector<Complex>& vhat, std::vector<Complex>& out);

    TrajectoryConfig cfg_;
    std::size_t cutoff_;
    std::vector<double> phys_;
    std::vector<double> flux_vals_;
    std::vector<Complex> k1_, u1_, u2_;
    std::vector<Complex> backup_;
};

/// Sum over k != 0 of |u_hat(k)|^2 for a half spectrum.
double half_spectrum_energy(const std::vector<Complex>& uhat) noexcept;

using Observer = std::function<void(const TrajectoryState&)>;

struct IntegrateOptions {
    /// Report the starting state to the observer before stepping.
    bool observe_start = true;
};

/// Runs from `start` to cfg.t_end. Kicks are applied at integer times
/// (before the record at that time, if any); the observer sees the state at
/// every multiple of cfg.record_interval and at t_end.
///
/// At every observed time the spectral state is rebuilt from the observed
/// samples, so restarting from a saved record reproduces the uninterrupted
/// run bit for bit.
TrajectoryState integrate(const TrajectoryConfig& cfg, TrajectoryState start, const Observer& observer,
                          IntegrateOptions options = {});
TrajectoryState integrate(const TrajectoryConfig& cfg, const Field& u0, const Observer& observer);

using LockstepObserver = std::function<void(std::size_t member, const TrajectoryState&)>;

/// Runs several members side by side with one time step (the smallest any
/// member allows) and one set of noise counters, so all of them see the same
/// forcing realization. Members may differ in nu, grid and flux; they must
/// share the forcing, trajectory index, record_interval and t_end, and start
/// at the same time with the same counters. Records and restarts behave as in
/// integrate(), which is the single-member case.
std::vector<TrajectoryState> integrate_lockstep(std::span<const TrajectoryConfig> cfgs, std::vector<TrajectoryState> starts,
                                                const LockstepObserver& observer, IntegrateOptions options = {});

}  // namespace burgers
