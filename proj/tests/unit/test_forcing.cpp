#include "burgers/forcing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace burgers;

namespace {

SpectralAmplitudes only_a1() {
    SpectralAmplitudes a;
    a.a = {1.0};
    a.b = {0.0};
    return a;
}

double sq(double x) { return x * x; }

}  // namespace

TEST(Amplitudes, TraceConstants) {
    EXPECT_DOUBLE_EQ(trace_constant(only_a1(), 0), 1.0);
    EXPECT_NEAR(trace_constant(only_a1(), 1), 4 * std::numbers::pi * std::numbers::pi, 1e-12);
    SpectralAmplitudes e;
    for (int k = 1; k <= 20; ++k) {
        e.a.push_back(std::exp(-k));
        e.b.push_back(0.0);
    }
    EXPECT_NEAR(trace_constant(e, 0), 0.15651764274966565, 1e-12);
}

TEST(Amplitudes, Validation) {
    SpectralAmplitudes zero;
    zero.a = {0.0, 0.0};
    zero.b = {0.0, 0.0};
    EXPECT_THROW(zero.validate(), std::invalid_argument);
    SpectralAmplitudes neg = only_a1();
    neg.a[0] = -1.0;
    EXPECT_THROW(neg.validate(), std::invalid_argument);
    SpectralAmplitudes mismatch = only_a1();
    mismatch.b.push_back(1.0);
    EXPECT_THROW(mismatch.validate(), std::invalid_argument);
    EXPECT_NO_THROW(SpectralAmplitudes::exponential().validate());
    EXPECT_EQ(SpectralAmplitudes::exponential().k_max(), 16u);
}

TEST(Amplitudes, BandLimit) {
    EXPECT_THROW(check_forcing_band(SpectralAmplitudes::exponential(16), Grid(32)), std::invalid_argument);
    EXPECT_NO_THROW(check_forcing_band(SpectralAmplitudes::exponential(16), Grid(64)));
}

TEST(NoiseStream, CounterBased) {
    const NoiseStream s(42, 3);
    auto a = s.engine(17, NoiseStream::Purpose::white);
    auto b = s.engine(17, NoiseStream::Purpose::white);
    EXPECT_EQ(a(), b());
    EXPECT_NE(s.engine(17, NoiseStream::Purpose::kick)(), s.engine(17, NoiseStream::Purpose::white)());
    EXPECT_NE(NoiseStream(42, 4).engine(17, NoiseStream::Purpose::white)(), s.engine(17, NoiseStream::Purpose::white)());
}

TEST(Kick, TwoPointSingleMode) {
    KickForcing kick{only_a1(), CoefficientLaw::two_point};
    const NoiseStream s(1, 0);
    const Grid g(64);
    for (std::uint64_t i = 0; i < 8; ++i) {
        const Field z = sample_kick(kick, s, i, g);
        const auto c = real_coefficients(z, 2);
        EXPECT_NEAR(std::abs(c.a[0]), 1.0, 1e-14);
        for (std::size_t j = 0; j < 64; ++j) {
            EXPECT_NEAR(std::abs(z.physical()[j]), std::sqrt(2.0) * std::abs(std::cos(2 * std::numbers::pi * j / 64.0)),
                        1e-14);
        }
    }
}

TEST(Kick, ZeroAmplitudesGiveZero) {
    SpectralAmplitudes z;
    z.a = {0.0, 0.0};
    z.b = {0.0, 0.0};
    const Field f = sample_kick(KickForcing{z}, NoiseStream(1, 0), 0, Grid(32));
    EXPECT_EQ(lp_norm(f, kInfinity), 0.0);
}

TEST(Kick, CoefficientsRecoveredExactly) {
    KickForcing kick{SpectralAmplitudes::exponential(6, 0.5)};
    const NoiseStream s(9, 2);
    const auto drawn = draw_kick_coefficients(kick, s, 5);
    const auto c = real_coefficients(sample_kick(kick, s, 5, Grid(64)), 6);
    for (std::size_t k = 0; k < 6; ++k) {
        EXPECT_NEAR(c.a[k], kick.amplitudes.a[k] * drawn.cos_part[k], 1e-14);
        EXPECT_NEAR(c.b[k], kick.amplitudes.b[k] * drawn.sin_part[k], 1e-14);
    }
}

TEST(Kick, GaussianSecondMoment) {
    KickForcing kick{only_a1()};
    const NoiseStream s(5, 0);
    double m2 = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) m2 += sq(draw_kick_coefficients(kick, s, i).cos_part[0]);
    EXPECT_NEAR(m2 / n, 1.0, 0.05);
}

TEST(White, ZeroStepIsZero) {
    const Field w = white_increment(WhiteForcing{SpectralAmplitudes::exponential()}, NoiseStream(1, 0), 0, 0.0, Grid(64));
    EXPECT_EQ(lp_norm(w, kInfinity), 0.0);
}

TEST(White, SecondMomentsMatchTraces) {
    const WhiteForcing white{SpectralAmplitudes::exponential(8, 0.7)};
    const NoiseStream s(21, 0);
    const Grid g(64);
    const double dt = 1e-3;
    const int n = 10000;
    double m[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const Field w = white_increment(white, s, i, dt, g);
        for (unsigned order = 0; order < 3; ++order) m[order] += sq(hs_norm(w, order));
    }
    for (unsigned order = 0; order < 3; ++order) {
        EXPECT_NEAR(m[order] / n / dt, trace_constant(white.amplitudes, order),
                    0.05 * trace_constant(white.amplitudes, order))
            << "m = " << order;
    }
}

TEST(White, DiagonalCovariance) {
    const WhiteForcing white{SpectralAmplitudes::exponential(4, 0.1)};
    const NoiseStream s(8, 1);
    const int n = 10000;
    double cross = 0.0, cs = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto c = draw_white_coefficients(white, s, i, 1.0);
        cross += c.cos_part[0] * c.cos_part[1];
        cs += c.cos_part[2] * c.sin_part[2];
    }
    EXPECT_LT(std::abs(cross / n), 3.0 / std::sqrt(n));
    EXPECT_LT(std::abs(cs / n), 3.0 / std::sqrt(n));
}

TEST(White, Reproducible) {
    const WhiteForcing white{SpectralAmplitudes::exponential()};
    const Field a = white_increment(white, NoiseStream(3, 7), 99, 0.01, Grid(128));
    const Field b = white_increment(white, NoiseStream(3, 7), 99, 0.01, Grid(128));
    for (std::size_t j = 0; j < 128; ++j) EXPECT_EQ(a.physical()[j], b.physical()[j]);
}
