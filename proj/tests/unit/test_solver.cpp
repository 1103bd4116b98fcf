#include "burgers/config.hpp"
#include "burgers/hopf_cole.hpp"
#include "burgers/solver.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace burgers;

namespace {

constexpr double kPi = std::numbers::pi;

Field sine(std::size_t n, double amplitude = 1.0) {
    return Field::sample(Grid(n), [amplitude](double x) { return amplitude * std::sin(2 * kPi * x); });
}

TrajectoryConfig base(std::size_t n, double nu) {
    TrajectoryConfig c;
    c.grid = Grid(n);
    c.nu = nu;
    c.t_end = 1.0;
    c.record_interval = 0.25;
    return c;
}

TrajectoryConfig white(std::size_t n, double nu, std::uint64_t seed = 5) {
    TrajectoryConfig c = base(n, nu);
    c.forcing.kind = WhiteForcing{SpectralAmplitudes::exponential()};
    c.forcing.seed = seed;
    return c;
}

void expect_same(const Field& a, const Field& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) ASSERT_EQ(a.physical()[j], b.physical()[j]) << "j = " << j;
}

double energy(const Field& u) { return std::pow(lp_norm(u, 2), 2); }

}  // namespace

TEST(TrajectoryConfig, Validation) {
    TrajectoryConfig c = base(64, 0.01);
    EXPECT_NO_THROW(c.validate());
    c.nu = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = white(32, 0.01);
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Stepper, ZeroStaysZero) {
    Stepper s(base(64, 0.01));
    TrajectoryState st{0.0, Field(Grid(64))};
    for (int i = 0; i < 10; ++i) st = s.step_deterministic(st, 1e-3);
    EXPECT_EQ(lp_norm(st.u, kInfinity), 0.0);
    EXPECT_NEAR(st.t, 1e-2, 1e-15);
}

TEST(Stepper, ZeroAmplitudeNoiseMatchesDeterministic) {
    TrajectoryConfig c = base(64, 0.01);
    SpectralAmplitudes z;
    z.a = {0.0};
    z.b = {0.0};
    c.forcing.kind = WhiteForcing{z};
    Stepper s(c);
    const TrajectoryState st{0.0, sine(64)};
    const NoiseStream stream(1, 0);
    const TrajectoryState a = s.step_stochastic(st, 1e-3, stream);
    const TrajectoryState b = s.step_deterministic(st, 1e-3);
    expect_same(a.u, b.u);
    EXPECT_EQ(a.step_index, 1u);
}

TEST(Stepper, KickInsertion) {
    TrajectoryConfig c = base(64, 0.01);
    const KickForcing kick{SpectralAmplitudes::exponential(4, 0.5)};
    c.forcing.kind = kick;
    c.forcing.seed = 3;
    Stepper s(c);
    const NoiseStream stream(3, 0);
    const TrajectoryState kicked = s.apply_kick({0.0, Field(Grid(64))}, stream);
    const Field expected = sample_kick(kick, stream, 0, Grid(64));
    for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(kicked.u.physical()[j], expected.physical()[j], 1e-15);
    EXPECT_EQ(kicked.kick_index, 1u);

    SpectralAmplitudes z;
    z.a = {0.0};
    z.b = {0.0};
    c.forcing.kind = KickForcing{z};
    Stepper quiet(c);
    const TrajectoryState st{0.0, sine(64)};
    const Field after = quiet.apply_kick(st, stream).u;
    for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(after.physical()[j], st.u.physical()[j], 1e-15);
}

TEST(Integrate, ZeroDurationRecordsInitialState) {
    TrajectoryConfig c = base(64, 0.01);
    c.t_end = 0.0;
    std::vector<TrajectoryState> seen;
    integrate(c, sine(64), [&](const TrajectoryState& s) { seen.push_back(s); });
    ASSERT_EQ(seen.size(), 1u);
    EXPECT_EQ(seen[0].t, 0.0);
    expect_same(seen[0].u, sine(64));
}

TEST(Integrate, RecordTimes) {
    std::vector<double> times;
    integrate(base(64, 0.05), sine(64), [&](const TrajectoryState& s) { times.push_back(s.t); });
    ASSERT_EQ(times.size(), 5u);
    for (std::size_t i = 0; i < times.size(); ++i) EXPECT_NEAR(times[i], 0.25 * i, 1e-12);
}

TEST(Integrate, LinearDecayAtSmallAmplitude) {
    const double nu = 0.05, t = 0.5;
    TrajectoryConfig c = base(64, nu);
    c.t_end = t;
    const TrajectoryState end = integrate(c, sine(64, 1e-8), nullptr);
    EXPECT_NEAR(lp_norm(end.u, kInfinity) / 1e-8, std::exp(-4 * kPi * kPi * nu * t), 1e-6);
}

TEST(Integrate, MeanConservedAndBudgetCloses) {
    TrajectoryConfig c = base(512, 0.01);
    const Field u0 = random_smooth_field(Grid(512), 4, 0);
    const TrajectoryState end = integrate(c, u0, nullptr);
    EXPECT_NEAR(end.u.mean(), 0.0, 1e-14);
    const double lost = energy(u0) - energy(end.u);
    EXPECT_NEAR(end.budget.dissipated, lost, 1e-3 * lost);
    EXPECT_EQ(end.budget.injected, 0.0);
}

TEST(Integrate, WhiteNoiseExpectedInjection) {
    TrajectoryConfig c = white(128, 0.02);
    const TrajectoryState end = integrate(c, Field(Grid(128)), nullptr);
    EXPECT_NEAR(end.budget.injected_expected, trace_constant(SpectralAmplitudes::exponential(), 0), 1e-9);
    EXPECT_GT(end.step_index, 0u);
}

TEST(Integrate, KicksAtIntegerTimes) {
    TrajectoryConfig c = base(64, 0.05);
    c.forcing.kind = KickForcing{SpectralAmplitudes::exponential(4, 0.5)};
    c.t_end = 3.0;
    c.record_interval = 0.5;
    const TrajectoryState end = integrate(c, Field(Grid(64)), nullptr);
    EXPECT_EQ(end.kick_index, 3u);
    EXPECT_NEAR(end.budget.injected_expected, 3 * trace_constant(SpectralAmplitudes::exponential(4, 0.5), 0), 1e-12);
}

TEST(Integrate, RestartIsBitwise) {
    TrajectoryConfig c = white(128, 0.02);
    c.t_end = 2.0;
    const Field u0 = random_smooth_field(Grid(128), 1, 0);
    const TrajectoryState full = integrate(c, u0, nullptr);
    TrajectoryConfig first = c;
    first.t_end = 1.0;
    TrajectoryState mid = integrate(first, u0, nullptr);
    const TrajectoryState resumed = integrate(c, std::move(mid), nullptr);
    expect_same(full.u, resumed.u);
    EXPECT_EQ(full.step_index, resumed.step_index);
}

TEST(Integrate, Deterministic) {
    const TrajectoryConfig c = white(128, 0.02, 77);
    expect_same(integrate(c, Field(Grid(128)), nullptr).u, integrate(c, Field(Grid(128)), nullptr).u);
}

TEST(Lockstep, SingleMemberMatchesIntegrate) {
    const TrajectoryConfig c = white(128, 0.02);
    const Field u0 = random_smooth_field(Grid(128), 2, 0);
    const TrajectoryState a = integrate(c, u0, nullptr);
    const auto b = integrate_lockstep(std::span<const TrajectoryConfig>(&c, 1), {TrajectoryState{0.0, u0}}, nullptr);
    expect_same(a.u, b.front().u);
}

TEST(Lockstep, MembersShareNoiseAcrossGrids) {
    TrajectoryConfig fine = white(256, 0.02);
    TrajectoryConfig coarse = white(128, 0.02);
    coarse.time_step = fine.time_step;
    const Field u0 = random_smooth_field(Grid(128), 2, 0);
    const std::vector<TrajectoryConfig> members{coarse, fine};
    const auto out = integrate_lockstep(members, {TrajectoryState{0.0, u0}, TrajectoryState{0.0, resample(u0, Grid(256))}},
                                        nullptr);
    EXPECT_EQ(out[0].step_index, out[1].step_index);
    EXPECT_LT(lp_norm(resample(out[1].u, Grid(128)) - out[0].u, 1), 1e-6);

    std::vector<TrajectoryConfig> mismatched{coarse, white(256, 0.02, 6)};
    EXPECT_THROW(integrate_lockstep(mismatched, {TrajectoryState{0.0, u0}, TrajectoryState{0.0, resample(u0, Grid(256))}},
                                    nullptr),
                 std::invalid_argument);
}

TEST(TailFraction, SmoothFieldIsResolved) {
    EXPECT_LT(spectral_tail_fraction(random_smooth_field(Grid(256), 1, 0)), 1e-12);
    EXPECT_EQ(spectral_tail_fraction(Field(Grid(64))), 0.0);
}

TEST(HopfCole, Primitive) {
    const Field h = primitive(sine(64));
    for (std::size_t j = 0; j < 64; ++j) EXPECT_NEAR(h.physical()[j], -std::cos(2 * kPi * j / 64.0) / (2 * kPi), 1e-15);
    EXPECT_EQ(lp_norm(primitive(Field(Grid(64))), kInfinity), 0.0);
}

TEST(HopfCole, ZeroStaysZero) {
    EXPECT_EQ(lp_norm(hopf_cole_solve(Field(Grid(64)), 0.01, 0.5), kInfinity), 0.0);
}

TEST(HopfCole, ViscousDecayBracket) {
    const Field u = hopf_cole_solve(sine(256), 1.0, 0.1);
    const double linear = std::exp(-4 * kPi * kPi * 0.1);
    const double amp = std::abs(u.coefficient(1)) * 2;
    EXPECT_GE(amp, 0.8 * linear);
    EXPECT_LE(amp, 1.0 * linear);
}

TEST(HopfCole, OddSymmetry) {
    const std::size_t n = 512;
    const Field u = hopf_cole_solve(sine(n), 0.01, 0.3);
    for (std::size_t j = 1; j < n; ++j) EXPECT_NEAR(u.physical()[n - j], -u.physical()[j], 1e-10);
}

TEST(HopfCole, AgreesWithSolver) {
    TrajectoryConfig c = base(1024, 0.01);
    c.t_end = 0.5;
    const TrajectoryState end = integrate(c, sine(1024), nullptr);
    EXPECT_LT(lp_norm(end.u - hopf_cole_solve(sine(1024), 0.01, 0.5), 2), 1e-4);
}

TEST(HopfCole, RefusesSmallViscosity) {
    EXPECT_THROW(hopf_cole_solve(sine(1024), 5e-4, 0.1), DynamicRangeFailure);
}
