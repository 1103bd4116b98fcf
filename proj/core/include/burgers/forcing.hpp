#pragma once

#include "burgers/field.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace burgers {

/// Diagonal noise amplitudes a_k, b_k for k = 1..k_max (index k-1).
struct SpectralAmplitudes {
    std::vector<double> a;
    std::vector<double> b;

    std::size_t k_max() const noexcept { return a.size(); }

    /// a_k = b_k = scale * exp(-rate k), k = 1..k_max.
    static SpectralAmplitudes exponential(std::size_t k_max = 16, double rate = 0.7, double scale = 1.0);
    static SpectralAmplitudes single_cosine(double a1 = 1.0);

    /// Throws std::invalid_argument on size mismatch, negative entries or an
    /// all-zero table (the force would be trivial).
    void validate() const;
};

/// I_m = sum_k (a_k^2 + b_k^2) (2 pi k)^{2m}.
double trace_constant(const SpectralAmplitudes& amps, unsigned m);

enum class CoefficientLaw { gaussian, two_point };

struct NoForcing {};
struct KickForcing {
    SpectralAmplitudes amplitudes;
    CoefficientLaw law = CoefficientLaw::gaussian;
};
struct WhiteForcing {
    SpectralAmplitudes amplitudes;
};

struct ForcingSpec {
    std::variant<NoForcing, KickForcing, WhiteForcing> kind;
    std::uint64_t seed = 0;

    bool is_none() const noexcept { return std::holds_alternative<NoForcing>(kind); }
    bool is_kick() const noexcept { return std::holds_alternative<KickForcing>(kind); }
    bool is_white() const noexcept { return std::holds_alternative<WhiteForcing>(kind); }
    const SpectralAmplitudes* amplitudes() const noexcept;
};

/// Counter-based random source: every variate is a pure function of
/// (seed, trajectory, counter, purpose), so results never depend on the
/// order in which trajectories or steps are evaluated.
class NoiseStream {
public:
    enum class Purpose : std::uint64_t { white = 1, kick = 2, initial = 3, user = 4 };

    NoiseStream(std::uint64_t seed, std::uint64_t trajectory) : seed_(seed), trajectory_(trajectory) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t trajectory() const noexcept { return trajectory_; }

    /// A fresh engine keyed on (seed, trajectory, counter, purpose).
    std::mt19937_64 engine(std::uint64_t counter, Purpose purpose) const;

private:
    std::uint64_t seed_;
    std::uint64_t trajectory_;
};

/// Draws of A_k, B_k (kicks) or xi_k, xi~_k (white increments).
struct ForcingCoefficients {
    std::vector<double> cos_part;
    std::vector<double> sin_part;
};

ForcingCoefficients draw_kick_coefficients(const KickForcing& kick, const NoiseStream& stream,
                                           std::uint64_t kick_index);
ForcingCoefficients draw_white_coefficients(const WhiteForcing& white, const NoiseStream& stream,
                                            std::uint64_t step_index, double dt);

/// Adds sqrt2 sum_k (a_k c_k cos(2 pi k x) + b_k s_k sin(2 pi k x)) to a half
/// spectrum.
void add_forcing_modes(const SpectralAmplitudes& amps, const ForcingCoefficients& coeffs,
                       std::span<Complex> half_spectrum);

/// zeta = sqrt2 sum_k a_k A_k cos(2 pi k x) + sqrt2 sum_k b_k B_k sin(2 pi k x)
/// with i.i.d. zero-mean unit-variance A_k, B_k from the kick's law.
/// Throws std::invalid_argument when k_max > N/3.
Field sample_kick(const KickForcing& kick, const NoiseStream& stream, std::uint64_t kick_index,
                  const Grid& grid);

/// Increment of the diagonal Wiener process over one step of length dt:
/// same mode structure as a kick with N(0, dt) coefficients.
Field white_increment(const WhiteForcing& white, const NoiseStream& stream, std::uint64_t step_index,
                      double dt, const Grid& grid);

/// Throws std::invalid_argument when the forcing band exceeds N/3.
void check_forcing_band(const SpectralAmplitudes& amps, const Grid& grid);

}  // namespace burgers
