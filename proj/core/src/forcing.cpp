#include "burgers/forcing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace burgers {
namespace {

// SplitMix64 finalizer, used to spread the stream key over the seed space.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SpectralAmplitudes SpectralAmplitudes::exponential(std::size_t k_max, double rate, double scale) {
    SpectralAmplitudes amps;
    amps.a.resize(k_max);
    amps.b.resize(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double v = scale * std::exp(-rate * static_cast<double>(k));
        amps.a[k - 1] = v;
        amps.b[k - 1] = v;
    }
    return amps;
}

SpectralAmplitudes SpectralAmplitudes::single_cosine(double a1) {
    return SpectralAmplitudes{{a1}, {0.0}};
}

void SpectralAmplitudes::validate() const {
    if (a.size() != b.size()) throw std::invalid_argument("amplitudes: a and b differ in length");
    bool nonzero = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0.0 || b[i] < 0.0 || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
            throw std::invalid_argument("amplitudes must be finite and nonnegative");
        }
        nonzero = nonzero || a[i] > 0.0 || b[i] > 0.0;
    }
    if (!nonzero) throw std::invalid_argument("amplitudes: all zero, forcing would be trivial");
}

double trace_constant(const SpectralAmplitudes& amps, unsigned m) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= amps.k_max(); ++k) {
        const double w = std::pow(2.0 * std::numbers::pi * static_cast<double>(k), 2.0 * m);
        sum += (amps.a[k - 1] * amps.a[k - 1] + amps.b[k - 1] * amps.b[k - 1]) * w;
    }
    return sum;
}

const SpectralAmplitudes* ForcingSpec::amplitudes() const noexcept {
    if (const auto* k = std::get_if<KickForcing>(&kind)) return &k->amplitudes;
    if (const auto* w = std::get_if<WhiteForcing>(&kind)) return &w->amplitudes;
    return nullptr;
}

std::mt19937_64 NoiseStream::engine(std::uint64_t counter, Purpose purpose) const {
    std::uint64_t key = mix(seed_);
    key = mix(key ^ trajectory_);
    key = mix(key ^ counter);
    key = mix(key ^ static_cast<std::uint64_t>(purpose));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    return std::mt19937_64(seq);
}

ForcingCoefficients draw_kick_coefficients(const KickForcing& kick, const NoiseStream& stream,
                                           std::uint64_t kick_index) {
    const std::size_t k_max = kick.amplitudes.k_max();
    ForcingCoefficients c{std::vector<double>(k_max), std::vector<double>(k_max)};
    auto engine = stream.engine(kick_index, NoiseStream::Purpose::kick);
    if (kick.law == CoefficientLaw::gaussian) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < k_max; ++k) {
            c.cos_part[k] = normal(engine);
            c.sin_part[k] = normal(engine);
        }
    } else {
        std::bernoulli_distribution coin(0.5);
        for (std::size_t k = 0; k < k_max; ++k) {
            c.cos_part[k] = coin(engine) ? 1.0 : -1.0;
            c.sin_part[k] = coin(engine) ? 1.0 : -1.0;
        }
    }
    return c;
}

ForcingCoefficients draw_white_coefficients(const WhiteForcing& white, const NoiseStream& stream,
                                            std::uint64_t step_index, double dt) {
    if (dt < 0.0) throw std::invalid_argument("white increment: dt must be >= 0");
    const std::size_t k_max = white.amplitudes.k_max();
    ForcingCoefficients c{std::vector<double>(k_max), std::vector<double>(k_max)};
    if (dt == 0.0) return c;
    auto engine = stream.engine(step_index, NoiseStream::Purpose::white);
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    for (std::size_t k = 0; k < k_max; ++k) {
        c.cos_part[k] = normal(engine);
        c.sin_part[k] = normal(engine);
    }
    return c;
}

void add_forcing_modes(const SpectralAmplitudes& amps, const ForcingCoefficients& coeffs,
                       std::span<Complex> half) {
    // sqrt2 cos(2 pi k x) -> u_hat(k) = 1/sqrt2; sqrt2 sin(2 pi k x) -> u_hat(k) = -i/sqrt2.
    const double s = std::numbers::sqrt2 / 2.0;
    for (std::size_t k = 1; k <= amps.k_max(); ++k) {
        half[k] += Complex{s * amps.a[k - 1] * coeffs.cos_part[k - 1],
                           -s * amps.b[k - 1] * coeffs.sin_part[k - 1]};
    }
}

void check_forcing_band(const SpectralAmplitudes& amps, const Grid& grid) {
    if (3 * amps.k_max() > grid.size()) {
        throw std::invalid_argument("forcing K_max = " + std::to_string(amps.k_max()) +
                                    " exceeds N/3 for N = " + std::to_string(grid.size()));
    }
}

Field sample_kick(const KickForcing& kick, const NoiseStream& stream, std::uint64_t kick_index,
                  const Grid& grid) {
    check_forcing_band(kick.amplitudes, grid);
    std::vector<Complex> half(grid.modes());
    add_forcing_modes(kick.amplitudes, draw_kick_coefficients(kick, stream, kick_index), half);
    return Field::from_spectral(grid, std::move(half));
}

Field white_increment(const WhiteForcing& white, const NoiseStream& stream, std::uint64_t step_index,
                      double dt, const Grid& grid) {
    check_forcing_band(white.amplitudes, grid);
    std::vector<Complex> half(grid.modes());
    add_forcing_modes(white.amplitudes, draw_white_coefficients(white, stream, step_index, dt), half);
    return Field::from_spectral(grid, std::move(half));
}

}  // namespace burgers
