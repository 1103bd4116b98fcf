#include "burgers/flux.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace burgers {

void FluxFunction::eval_many(std::span<const double> u, std::span<double> out) const {
    if (quadratic) {
        for (std::size_t j = 0; j < u.size(); ++j) out[j] = 0.5 * u[j] * u[j];
        return;
    }
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = eval(u[j]);
}

double FluxFunction::max_speed(std::span<const double> u) const {
    double m = 0.0;
    if (quadratic) {
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    }
    for (double v : u) m = std::max(m, std::abs(d1(v)));
    return m;
}

ConvexityViolation::ConvexityViolation(double witness, double value)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "flux is not strongly convex: f''(" << witness << ") = " << value;
          return os.str();
      }()),
      witness_(witness),
      value_(value) {}

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

FluxFunction classical_flux() {
    FluxFunction f;
    f.name = "classical";
    f.eval = [](double u) { return 0.5 * u * u; };
    f.d1 = [](double u) { return u; };
    f.d2 = [](double) { return 1.0; };
    f.sigma = 1.0;
    f.growth_exponents = {2.0, 1.0, 0.0};
    f.quadratic = true;
    return f;
}

FluxFunction classical_plus_cos(double eps) {
    if (!(std::abs(eps) < 1.0)) throw std::invalid_argument("classical+cos: need |eps| < 1");
    FluxFunction f;
    f.name = "classical+cos:" + shortest(eps);
    f.eval = [eps](double u) { return 0.5 * u * u + eps * std::cos(u); };
    f.d1 = [eps](double u) { return u - eps * std::sin(u); };
    f.d2 = [eps](double u) { return 1.0 - eps * std::cos(u); };
    f.sigma = 1.0 - std::abs(eps);
    f.growth_exponents = {2.0, 1.0, 0.0};
    return f;
}

FluxFunction shifted_flux(const FluxFunction& f, double b) {
    FluxFunction g;
    g.name = "shifted:" + shortest(b) + ":" + f.name;
    g.eval = [e = f.eval, b](double y) { return e(y + b) - b * y; };
    g.d1 = [d = f.d1, b](double y) { return d(y + b) - b; };
    g.d2 = [d = f.d2, b](double y) { return d(y + b); };
    g.sigma = f.sigma;
    g.working_range = {f.working_range.lo - b, f.working_range.hi - b};
    g.growth_exponents = f.growth_exponents;
    return g;
}

double check_convexity(const FluxFunction& f, std::size_t samples) {
    if (samples < 2) throw std::invalid_argument("check_convexity: need at least 2 samples");
    const auto [lo, hi] = f.working_range;
    double min_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double v = f.d2(x);
        if (!(v > 0.0)) throw ConvexityViolation(x, v);
        min_d2 = std::min(min_d2, v);
    }
    return min_d2;
}

void check_growth(const FluxFunction& f) {
    if (f.growth_exponents.size() < 2) return;
    const double h1 = f.growth_exponents[1];
    if (!(h1 >= 1.0 && h1 < 2.0)) {
        throw std::invalid_argument("flux growth exponent h(1) must lie in [1, 2)");
    }
}

namespace {

double parse_double(std::string_view text) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw std::invalid_argument("flux spec: bad number '" + s + "'");
    }
    return v;
}

}  // namespace

FluxFunction parse_flux(std::string_view spec) {
    if (spec == "classical") return classical_flux();
    constexpr std::string_view cos_prefix = "classical+cos:";
    if (spec.starts_with(cos_prefix)) return classical_plus_cos(parse_double(spec.substr(cos_prefix.size())));
    constexpr std::string_view shift_prefix = "shifted:";
    if (spec.starts_with(shift_prefix)) {
        const auto rest = spec.substr(shift_prefix.size());
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("flux spec: expected shifted:<b>:<inner>");
        return shifted_flux(parse_flux(rest.substr(colon + 1)), parse_double(rest.substr(0, colon)));
    }
    throw std::invalid_argument("unknown flux '" + std::string(spec) + "'");
}

}  // namespace burgers
