#include "burgers/solver.hpp"

#include "burgers/fft.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace burgers {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTimeTol = 1e-12;

std::vector<Complex> copy_spectrum(const Field& f) {
    return {f.spectral().begin(), f.spectral().end()};
}

bool is_integer_time(double t) { return std::abs(t - std::round(t)) <= kTimeTol * std::max(1.0, t); }

}  // namespace

void TrajectoryConfig::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (!(record_interval > 0.0)) throw std::invalid_argument("record_interval must be positive");
    if (!(time_step.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (time_step.adaptive && !(time_step.cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
    if (const auto* amps = forcing.amplitudes()) check_forcing_band(*amps, grid);
}

double half_spectrum_energy(const std::vector<Complex>& uhat) noexcept {
    double e = 0.0;
    const std::size_t nyq = uhat.size() - 1;
    for (std::size_t k = 1; k < nyq; ++k) e += 2.0 * std::norm(uhat[k]);
    return e + std::norm(uhat[nyq]);
}

double spectral_tail_fraction(const Field& u) {
    const auto c = u.spectral();
    const std::size_t n = u.size();
    const std::size_t lo = n / 4, hi = n / 3;
    double tail = 0.0;
    for (std::size_t k = lo + 1; k <= hi && k < c.size(); ++k) tail += std::norm(c[k]);
    const double total = spectral_energy(u) / 2.0;
    return total > 0.0 ? tail / total : 0.0;
}

Stepper::Stepper(TrajectoryConfig cfg)
    : cfg_(std::move(cfg)),
      cutoff_(cfg_.grid.size() / 3),
      phys_(cfg_.grid.size()),
      flux_vals_(cfg_.grid.size()),
      k1_(cfg_.grid.modes()),
      u1_(cfg_.grid.modes()),
      u2_(cfg_.grid.modes()) {
    cfg_.validate();
}

double Stepper::allowed_dt(double speed) const noexcept {
    const auto& p = cfg_.time_step;
    if (!p.adaptive || speed <= 0.0) return p.dt;
    return std::min(p.dt, p.cfl * cfg_.grid.spacing() / speed);
}

void Stepper::apply_mask(std::vector<Complex>& uhat) const noexcept {
    uhat[0] = Complex{};
    for (std::size_t k = cutoff_ + 1; k < uhat.size(); ++k) uhat[k] = Complex{};
}

void Stepper::diffuse(std::vector<Complex>& uhat, double dt, EnergyBudget& budget) const {
    const double c = 4.0 * std::numbers::pi * std::numbers::pi * cfg_.nu * dt;
    double removed = 0.0;
    // exp(-c k^2) = exp(-c (k-1)^2) * exp(-c (2k-1)), the ratio itself a geometric sequence.
    const double q = std::exp(-2.0 * c);
    double ratio = std::exp(-c);
    double factor = 1.0;
    for (std::size_t k = 1; k <= cutoff_; ++k) {
        factor *= ratio;
        ratio *= q;
        if (factor < 1e-150) factor = 0.0;
        removed += 2.0 * std::norm(uhat[k]) * (1.0 - factor * factor);
        uhat[k] *= factor;
    }
    budget.dissipated += removed;
}

double Stepper::rhs(const std::vector<Complex>& vhat, std::vector<Complex>& out) {
    fft::inverse(vhat, phys_);
    const double speed = cfg_.flux.max_speed(phys_);
    cfg_.flux.eval_many(phys_, flux_vals_);
    fft::forward(flux_vals_, out);
    out[0] = Complex{};
    for (std::size_t k = 1; k <= cutoff_; ++k) {
        out[k] *= Complex{0.0, -kTwoPi * static_cast<double>(k)};
    }
    for (std::size_t k = cutoff_ + 1; k < out.size(); ++k) out[k] = Complex{};
    return speed;
}

double Stepper::advance(std::vector<Complex>& uhat, double dt, EnergyBudget& budget) {
    diffuse(uhat, 0.5 * dt, budget);

    // Shu-Osher SSP-RK3 on v_t = -(f(v))_x.
    const double speed = rhs(uhat, k1_);
    for (std::size_t k = 0; k < uhat.size(); ++k) u1_[k] = uhat[k] + dt * k1_[k];
    rhs(u1_, k1_);
    for (std::size_t k = 0; k < uhat.size(); ++k) u2_[k] = 0.75 * uhat[k] + 0.25 * (u1_[k] + dt * k1_[k]);
    rhs(u2_, k1_);
    for (std::size_t k = 0; k < uhat.size(); ++k) {
        uhat[k] = (1.0 / 3.0) * uhat[k] + (2.0 / 3.0) * (u2_[k] + dt * k1_[k]);
    }

    diffuse(uhat, 0.5 * dt, budget);
    apply_mask(uhat);
    return speed;
}

void Stepper::add_white(std::vector<Complex>& uhat, std::uint64_t step_index, double dt,
                        const NoiseStream& stream, EnergyBudget& budget) const {
    const auto* white = std::get_if<WhiteForcing>(&cfg_.forcing.kind);
    if (!white) return;
    const double before = half_spectrum_energy(uhat);
    add_forcing_modes(white->amplitudes, draw_white_coefficients(*white, stream, step_index, dt), uhat);
    budget.injected += half_spectrum_energy(uhat) - before;
    budget.injected_expected += trace_constant(white->amplitudes, 0) * dt;
}

void Stepper::add_kick(std::vector<Complex>& uhat, std::uint64_t kick_index, const NoiseStream& stream,
                       EnergyBudget& budget) const {
    const auto* kick = std::get_if<KickForcing>(&cfg_.forcing.kind);
    if (!kick) return;
    const double before = half_spectrum_energy(uhat);
    add_forcing_modes(kick->amplitudes, draw_kick_coefficients(*kick, stream, kick_index), uhat);
    budget.injected += half_spectrum_energy(uhat) - before;
    budget.injected_expected += trace_constant(kick->amplitudes, 0);
}

TrajectoryState Stepper::step_deterministic(const TrajectoryState& state, double dt) {
    auto uhat = copy_spectrum(state.u);
    apply_mask(uhat);
    TrajectoryState next = state;
    advance(uhat, dt, next.budget);
    if (!std::isfinite(half_spectrum_energy(uhat))) {
        throw StabilityFailure("non-finite state after step", state);
    }
    next.t = state.t + dt;
    next.u = Field::from_spectral(cfg_.grid, std::move(uhat));
    return next;
}

TrajectoryState Stepper::step_stochastic(const TrajectoryState& state, double dt, const NoiseStream& stream) {
    if (!cfg_.forcing.is_white()) throw std::invalid_argument("step_stochastic requires white forcing");
    auto uhat = copy_spectrum(state.u);
    apply_mask(uhat);
    TrajectoryState next = state;
    advance(uhat, dt, next.budget);
    add_white(uhat, state.step_index, dt, stream, next.budget);
    if (!std::isfinite(half_spectrum_energy(uhat))) {
        throw StabilityFailure("non-finite state after step", state);
    }
    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    next.u = Field::from_spectral(cfg_.grid, std::move(uhat));
    return next;
}

TrajectoryState Stepper::apply_kick(const TrajectoryState& state, const NoiseStream& stream) {
    if (!cfg_.forcing.is_kick()) throw std::invalid_argument("apply_kick requires kick forcing");
    auto uhat = copy_spectrum(state.u);
    TrajectoryState next = state;
    add_kick(uhat, state.kick_index, stream, next.budget);
    next.kick_index = state.kick_index + 1;
    next.u = Field::from_spectral(cfg_.grid, std::move(uhat));
    return next;
}

std::vector<TrajectoryState> integrate_lockstep(std::span<const TrajectoryConfig> cfgs, std::vector<TrajectoryState> starts,
                                                const LockstepObserver& observer, IntegrateOptions options) {
    if (cfgs.empty() || cfgs.size() != starts.size()) {
        throw std::invalid_argument("integrate_lockstep: need one start state per member");
    }
    const TrajectoryConfig& lead = cfgs.front();
    for (std::size_t m = 0; m < cfgs.size(); ++m) {
        const TrajectoryConfig& c = cfgs[m];
        const bool same_forcing = c.forcing.kind.index() == lead.forcing.kind.index() &&
                                  c.forcing.seed == lead.forcing.seed && c.trajectory == lead.trajectory &&
                                  (lead.forcing.is_none() || c.forcing.amplitudes()->a == lead.forcing.amplitudes()->a) &&
                                  (lead.forcing.is_none() || c.forcing.amplitudes()->b == lead.forcing.amplitudes()->b);
        if (!same_forcing) throw std::invalid_argument("integrate_lockstep: members must share the forcing");
        if (c.record_interval != lead.record_interval || c.t_end != lead.t_end) {
            throw std::invalid_argument("integrate_lockstep: members must share record_interval and t_end");
        }
        if (!(starts[m].u.grid() == c.grid)) throw std::invalid_argument("integrate: initial field grid mismatch");
        if (starts[m].t != starts.front().t || starts[m].step_index != starts.front().step_index ||
            starts[m].kick_index != starts.front().kick_index) {
            throw std::invalid_argument("integrate_lockstep: members must start at the same time and counters");
        }
    }

    const std::size_t members = cfgs.size();
    const NoiseStream stream(lead.forcing.seed, lead.trajectory);
    const bool white = lead.forcing.is_white();
    const bool kicked = lead.forcing.is_kick();

    std::vector<Stepper> steppers;
    std::vector<std::vector<Complex>> uhat(members);
    std::vector<double> speed(members);
    std::vector<TrajectoryState> state = std::move(starts);
    steppers.reserve(members);
    for (std::size_t m = 0; m < members; ++m) {
        steppers.emplace_back(cfgs[m]);
        state[m].tail_fraction = spectral_tail_fraction(state[m].u);
        uhat[m] = copy_spectrum(state[m].u);
        steppers[m].apply_mask(uhat[m]);
        speed[m] = cfgs[m].flux.max_speed(state[m].u.physical());
        if (options.observe_start && observer) observer(m, state[m]);
    }

    const double interval = lead.record_interval;
    const double t_end = lead.t_end;
    double t = state.front().t;
    auto record_index = static_cast<long long>(std::floor(t / interval + 1e-9)) + 1;
    auto next_kick = std::floor(t + kTimeTol) + 1.0;
    std::uint64_t step_index = state.front().step_index;
    std::uint64_t kick_index = state.front().kick_index;

    std::vector<Complex> backup;
    while (t < t_end - kTimeTol) {
        const double next_record = static_cast<double>(record_index) * interval;
        double target = std::min(next_record, t_end);
        if (kicked) target = std::min(target, next_kick);

        while (t < target - kTimeTol * std::max(1.0, target)) {
            double dt = steppers.front().allowed_dt(speed.front());
            for (std::size_t m = 1; m < members; ++m) dt = std::min(dt, steppers[m].allowed_dt(speed[m]));
            bool last = false;
            if (t + dt >= target - kTimeTol * std::max(1.0, target)) {
                dt = target - t;
                last = true;
            }
            for (std::size_t m = 0; m < members; ++m) {
                backup = uhat[m];
                speed[m] = steppers[m].advance(uhat[m], dt, state[m].budget);
                if (white) steppers[m].add_white(uhat[m], step_index, dt, stream, state[m].budget);
                const double e = half_spectrum_energy(uhat[m]);
                if (!std::isfinite(e) || e > 1e100) {
                    TrajectoryState last_valid = state[m];
                    last_valid.t = t;
                    last_valid.step_index = step_index;
                    last_valid.u = Field::from_spectral(cfgs[m].grid, std::move(backup));
                    std::ostringstream os;
                    os << "solution blew up at t = " << t << " (dt = " << dt << ")";
                    throw StabilityFailure(os.str(), std::move(last_valid));
                }
            }
            if (white) ++step_index;
            t = last ? target : t + dt;
        }

        if (kicked && is_integer_time(t) && std::abs(t - next_kick) <= kTimeTol * std::max(1.0, t)) {
            for (std::size_t m = 0; m < members; ++m) {
                steppers[m].add_kick(uhat[m], kick_index, stream, state[m].budget);
            }
            ++kick_index;
            next_kick += 1.0;
        }

        const bool at_record = std::abs(t - next_record) <= kTimeTol * std::max(1.0, t);
        const bool at_end = t >= t_end - kTimeTol * std::max(1.0, t_end);
        if (at_record || at_end) {
            for (std::size_t m = 0; m < members; ++m) {
                std::vector<double> samples(cfgs[m].grid.size());
                fft::inverse(uhat[m], samples);
                state[m].t = t;
                state[m].step_index = step_index;
                state[m].kick_index = kick_index;
                state[m].u = Field::from_samples(cfgs[m].grid, std::move(samples));
                state[m].tail_fraction = spectral_tail_fraction(state[m].u);
                uhat[m] = copy_spectrum(state[m].u);
                steppers[m].apply_mask(uhat[m]);
                speed[m] = cfgs[m].flux.max_speed(state[m].u.physical());
                if (observer) observer(m, state[m]);
            }
            if (at_record) ++record_index;
        }
    }

    for (std::size_t m = 0; m < members; ++m) {
        state[m].step_index = step_index;
        state[m].kick_index = kick_index;
        if (state[m].t != t) {
            std::vector<double> samples(cfgs[m].grid.size());
            fft::inverse(uhat[m], samples);
            state[m].t = t;
            state[m].u = Field::from_samples(cfgs[m].grid, std::move(samples));
        }
    }
    return state;
}

TrajectoryState integrate(const TrajectoryConfig& cfg, TrajectoryState start, const Observer& observer,
                          IntegrateOptions options) {
    std::vector<TrajectoryState> starts;
    starts.push_back(std::move(start));
    LockstepObserver forward;
    if (observer) forward = [&observer](std::size_t, const TrajectoryState& s) { observer(s); };
    return std::move(integrate_lockstep(std::span<const TrajectoryConfig>(&cfg, 1), std::move(starts), forward, options)
                         .front());
}

TrajectoryState integrate(const TrajectoryConfig& cfg, const Field& u0, const Observer& observer) {
    TrajectoryState start{0.0, u0};
    return integrate(cfg, std::move(start), observer);
}

}  // namespace burgers
