#include "burgers/field.hpp"

#include "burgers/fft.hpp"

#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace burgers {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("Field: grid mismatch");
}

}  // namespace

Field::Field(Grid grid)
    : data_(std::make_shared<const Data>(
          Data{grid, std::vector<double>(grid.size(), 0.0),
               std::vector<Complex>(grid.modes(), Complex{})})) {}

Field Field::from_physical(Grid grid, std::vector<double> samples) {
    if (samples.size() != grid.size()) throw std::invalid_argument("Field: sample count mismatch");
    std::vector<Complex> half(grid.modes());
    fft::forward(samples, half);
    const double mean = half[0].real();
    half[0] = Complex{};
    for (auto& v : samples) v -= mean;
    return Field(std::make_shared<const Data>(Data{grid, std::move(samples), std::move(half)}));
}

Field Field::from_samples(Grid grid, std::vector<double> samples) {
    if (samples.size() != grid.size()) throw std::invalid_argument("Field: sample count mismatch");
    std::vector<Complex> half(grid.modes());
    fft::forward(samples, half);
    half[0] = Complex{};
    return Field(std::make_shared<const Data>(Data{grid, std::move(samples), std::move(half)}));
}

Field Field::from_spectral(Grid grid, std::vector<Complex> half) {
    if (half.size() != grid.modes()) throw std::invalid_argument("Field: mode count mismatch");
    half[0] = Complex{};
    half.back().imag(0.0);
    std::vector<double> samples(grid.size());
    fft::inverse(half, samples);
    return Field(std::make_shared<const Data>(Data{grid, std::move(samples), std::move(half)}));
}

Complex Field::coefficient(long k) const noexcept {
    const long half = static_cast<long>(grid().nyquist());
    if (k == 0 || k > half || k <= -half) return {};
    if (k > 0) return data_->spectral[static_cast<std::size_t>(k)];
    return std::conj(data_->spectral[static_cast<std::size_t>(-k)]);
}

double Field::mean() const noexcept {
    const auto v = physical();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Field Field::operator+(const Field& other) const {
    check_same_grid(*this, other);
    std::vector<double> v(physical().begin(), physical().end());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += other.physical()[j];
    return from_physical(grid(), std::move(v));
}

Field Field::operator-(const Field& other) const {
    check_same_grid(*this, other);
    std::vector<double> v(physical().begin(), physical().end());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= other.physical()[j];
    return from_physical(grid(), std::move(v));
}

Field Field::operator*(double scale) const {
    std::vector<double> v(physical().begin(), physical().end());
    for (auto& x : v) x *= scale;
    std::vector<Complex> s(spectral().begin(), spectral().end());
    for (auto& c : s) c *= scale;
    return Field(std::make_shared<const Data>(Data{grid(), std::move(v), std::move(s)}));
}

Field derivative(const Field& f, unsigned m) {
    if (m == 0) return f;
    std::vector<Complex> s(f.spectral().begin(), f.spectral().end());
    for (std::size_t k = 0; k < s.size(); ++k) {
        s[k] *= std::pow(Complex{0.0, kTwoPi * static_cast<double>(k)}, static_cast<int>(m));
    }
    if (m % 2 == 1) s.back() = Complex{};
    return Field::from_spectral(f.grid(), std::move(s));
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1, got " + std::to_string(p));
    const auto v = f.physical();
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double sum = 0.0;
    if (p == 1.0) {
        for (double x : v) sum += std::abs(x);
        return sum / static_cast<double>(v.size());
    }
    if (p == 2.0) {
        for (double x : v) sum += x * x;
        return std::sqrt(sum / static_cast<double>(v.size()));
    }
    for (double x : v) sum += std::pow(std::abs(x), p);
    return std::pow(sum / static_cast<double>(v.size()), 1.0 / p);
}

double wmp_norm(const Field& f, SobolevIndex index) {
    if (index.m < 0.0 || index.m != std::floor(index.m)) {
        throw std::invalid_argument("wmp_norm: m must be a nonnegative integer (use hs_norm)");
    }
    return lp_norm(derivative(f, static_cast<unsigned>(index.m)), index.p);
}

double hs_norm(const Field& f, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("hs_norm: s must be >= 0");
    const auto c = f.spectral();
    const std::size_t nyq = c.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 1; k < nyq; ++k) {
        sum += 2.0 * std::pow(static_cast<double>(k), 2.0 * s) * std::norm(c[k]);
    }
    sum += std::pow(static_cast<double>(nyq), 2.0 * s) * std::norm(c[nyq]);
    return std::pow(kTwoPi, s) * std::sqrt(sum);
}

double hs_norm_increment(const Field& f, double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("hs_norm_increment: s must lie in (0,1)");
    const auto v = f.physical();
    const std::size_t n = v.size();
    const double h = f.grid().spacing();
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        double inc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = v[(i + j) % n] - v[i];
            inc += d * d;
        }
        const double ell = static_cast<double>(j) * h;
        total += inc * h / std::pow(ell, 2.0 * s + 1.0) * h;
    }
    return std::sqrt(total);
}

Field shift_points(const Field& f, std::size_t j) {
    const auto v = f.physical();
    const std::size_t n = v.size();
    j %= n;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = v[(i + j) % n];
    return Field::from_samples(f.grid(), std::move(out));
}

Field shift(const Field& f, double ell) { return shift_points(f, f.grid().shift_points(ell)); }

double spectral_energy(const Field& f) {
    const auto c = f.spectral();
    const std::size_t nyq = c.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 1; k < nyq; ++k) sum += 2.0 * std::norm(c[k]);
    return sum + std::norm(c[nyq]);
}

RealCoefficients real_coefficients(const Field& f, std::size_t k_max) {
    if (k_max >= f.grid().nyquist()) throw std::invalid_argument("real_coefficients: k_max too large");
    RealCoefficients out{std::vector<double>(k_max), std::vector<double>(k_max)};
    const double r2 = std::numbers::sqrt2;
    for (std::size_t k = 1; k <= k_max; ++k) {
        // u_hat(k) = (a_k - i b_k) / sqrt2 for a real field.
        const Complex c = f.spectral()[k];
        out.a[k - 1] = r2 * c.real();
        out.b[k - 1] = -r2 * c.imag();
    }
    return out;
}

Field resample(const Field& f, const Grid& target) {
    if (f.grid() == target) return f;
    std::vector<Complex> half(target.modes());
    const auto src = f.spectral();
    const std::size_t keep = std::min(f.grid().nyquist(), target.nyquist());
    for (std::size_t k = 1; k < keep; ++k) half[k] = src[k];
    // The source Nyquist term c (-1)^j is c cos(2 pi K x): c/2 at each of +-K.
    if (target.nyquist() > f.grid().nyquist()) half[keep] = Complex{0.5 * src[keep].real(), 0.0};
    return Field::from_spectral(target, std::move(half));
}

}  // namespace burgers
