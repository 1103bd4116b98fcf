#include "burgers/scaling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace burgers;

TEST(PowerLaw, ExactCube) {
    const std::vector<Point> pts{{1, 5}, {2, 40}, {4, 320}};
    const PowerLawFit f = fit_power_law(pts);
    EXPECT_NEAR(f.exponent, 3.0, 1e-12);
    EXPECT_NEAR(f.prefactor, 5.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(PowerLaw, ConstantHasZeroExponent) {
    const std::vector<Point> pts{{1, 2}, {3, 2}, {9, 2}};
    EXPECT_NEAR(fit_power_law(pts).exponent, 0.0, 1e-14);
}

TEST(PowerLaw, NoisySquare) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<Point> pts;
    for (double x = 1; x < 100; x *= 1.3) pts.emplace_back(x, x * x * (1 + 0.01 * g(rng)));
    EXPECT_NEAR(fit_power_law(pts).exponent, 2.0, 0.05);
}

TEST(PowerLaw, Invariances) {
    const std::vector<Point> pts{{0.1, 3.0}, {0.2, 4.1}, {0.5, 7.7}, {0.9, 8.0}};
    const PowerLawFit f = fit_power_law(pts);
    std::vector<Point> scaled_y, scaled_x;
    for (auto [x, y] : pts) {
        scaled_y.emplace_back(x, 7 * y);
        scaled_x.emplace_back(3 * x, y);
    }
    EXPECT_NEAR(fit_power_law(scaled_y).exponent, f.exponent, 1e-12);
    EXPECT_NEAR(fit_power_law(scaled_y).prefactor, 7 * f.prefactor, 1e-11);
    EXPECT_NEAR(fit_power_law(scaled_x).exponent, f.exponent, 1e-12);
    EXPECT_NEAR(fit_power_law(scaled_x).r_squared, f.r_squared, 1e-12);
}

TEST(PowerLaw, RejectsBadInput) {
    EXPECT_THROW(fit_power_law(std::vector<Point>{{1, 1}, {2, 2}}), std::invalid_argument);
    EXPECT_THROW(fit_power_law(std::vector<Point>{{1, 1}, {2, 0}, {3, 1}}), std::invalid_argument);
    EXPECT_THROW(fit_power_law(std::vector<Point>{{1, 1}, {1, 2}, {1, 3}}), std::invalid_argument);
}

TEST(Prefactor, FixedExponent) {
    const std::vector<Point> pts{{1, 3}, {2, 12}, {3, 27}};
    EXPECT_NEAR(fit_prefactor(pts, 2.0), 3.0, 1e-12);
}

TEST(LogCorrection, RecoversSlope) {
    std::vector<Point> pts;
    for (double nu : {4e-3, 2e-3, 1e-3, 5e-4}) pts.emplace_back(nu, 0.7 * std::abs(std::log(nu)) + 2.0);
    const LinearFit f = log_correction_fit(pts);
    EXPECT_NEAR(f.slope, 0.7, 1e-12);
    EXPECT_NEAR(f.intercept, 2.0, 1e-11);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(LogCorrection, DiscriminatesPowerLaw) {
    std::vector<double> nus;
    for (double nu = 1e-1; nu > 1e-6; nu /= 2) nus.push_back(nu);
    const auto genuine = log_correction_check(nus, [](double nu) { return 1.0 + std::abs(std::log(nu)); });
    const auto power = log_correction_check(nus, [](double nu) { return std::pow(nu, -0.2); });
    EXPECT_NEAR(genuine.fit.r_squared, 1.0, 1e-12);
    EXPECT_LT(power.fit.r_squared, 0.95);
}

TEST(Sweep, SpanAndSurvivors) {
    const std::vector<double> narrow{1e-3, 5e-4};
    EXPECT_THROW(sobolev_exponent_sweep(narrow, [](double nu) { return 1 / nu; }), std::invalid_argument);
    const std::vector<double> nus{4e-3, 2e-3, 1e-3, 5e-4};
    const auto r = sobolev_exponent_sweep(nus, [](double nu) {
        if (nu < 6e-4) throw std::runtime_error("unstable");
        return 2 / nu;
    });
    EXPECT_NEAR(r.fit.exponent, -1.0, 1e-12);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].first, 5e-4);
    EXPECT_THROW(sobolev_exponent_sweep(nus, [](double nu) -> double {
                     if (nu < 3e-3) throw std::runtime_error("unstable");
                     return nu;
                 }),
                 std::runtime_error);
}

TEST(TrimRange, TwoSidedAndFloor) {
    const ScaleRange r = trim_log_range({0.01, 1.0}, 0.1, 1e-4);
    EXPECT_NEAR(r.lo, 0.01 * std::pow(100.0, 0.1), 1e-15);
    EXPECT_NEAR(r.hi, 1.0 / std::pow(100.0, 0.1), 1e-15);
    const ScaleRange f = trim_log_range({0.0, 0.004}, 0.1, 1.0 / 1024);
    EXPECT_TRUE(f.contains(1.0 / 1024));
    EXPECT_NEAR(f.hi, 0.004 / std::pow(0.004 * 1024, 0.1), 1e-15);
    EXPECT_THROW(trim_log_range({0.1, 1.0}, 0.5, 1e-3), std::invalid_argument);
}

TEST(StructureScan, RecoversExponents) {
    StructureTable t;
    t.n_points = 1024;
    t.p_values = {1.0, 2.0};
    for (std::size_t s = 1; s <= 512; s *= 2) t.shifts.push_back(s);
    t.values.resize(2 * t.shifts.size());
    for (std::size_t s = 0; s < t.shifts.size(); ++s) {
        const double ell = t.ell(s);
        t.values[s] = 3 * ell;
        t.values[t.shifts.size() + s] = 0.5 * std::pow(ell, 1.5);
    }
    const auto fits = structure_exponent_scan(t, t.p_values, {0.0, 0.5});
    EXPECT_NEAR(fits[0].exponent, 1.0, 1e-12);
    EXPECT_NEAR(fits[1].exponent, 1.5, 1e-12);
    EXPECT_THROW(structure_exponent_scan(t, t.p_values, {0.01, 0.02}), std::invalid_argument);
    EXPECT_THROW(t.p_index(3.0), std::out_of_range);
}

TEST(SpectrumScan, RecoversInverseSquare) {
    std::vector<double> power(513);
    for (std::size_t k = 1; k < power.size(); ++k) power[k] = 1.0 / double(k * k);
    const PowerLawFit f = spectrum_scan(power, {0.01, 0.5});
    EXPECT_NEAR(f.exponent, -2.0, 1e-12);
}

TEST(FitWindows, Ranges) {
    FitWindows w;
    w.j1_hi = 1.0;
    w.j2_lo = 40.0;
    w.j2_hi = 0.25;
    EXPECT_DOUBLE_EQ(w.j1(1e-3).hi, 1e-3);
    EXPECT_DOUBLE_EQ(w.j2(1e-3).lo, 0.04);
    EXPECT_DOUBLE_EQ(w.j2(1e-3).hi, 0.25);
}
