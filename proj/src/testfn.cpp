#include "sinebeta/testfn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

TestFunction::TestFunction() = default;

TestFunction::TestFunction(Eval eval, double support_radius, std::string name)
    : eval_(std::move(eval)), radius_(support_radius), name_(std::move(name)) {
    if (!(support_radius > 0.0) || !std::isfinite(support_radius))
        throw InvalidArgument("TestFunction: support radius must be positive and finite");
}

double TestFunction::eval(int k, double x) const {
    if (k < 0 || k > 4) throw InvalidArgument("TestFunction: derivative order must be in 0..4");
    if (!eval_ || !(std::abs(x) < radius_)) return 0.0;
    return eval_(k, x);
}

TestFunction TestFunction::scaled(double c) const {
    if (!eval_ || c == 0.0) return TestFunction(Eval{}, radius_, name_) ;
    auto inner = eval_;
    return TestFunction([inner, c](int k, double x) { return c * inner(k, x); }, radius_, name_);
}

namespace {

// derivatives 0..4 of exp(-c/(1-x^2)) for |x| < 1
std::array<double, 5> bump_derivatives(double c, double x) {
    std::array<double, 5> out{};
    const double a = 1.0 - x, b = 1.0 + x;
    const double f = std::exp(-c / (a * b));
    if (f == 0.0) return out;
    // derivatives of g = -c/(1-x^2) = -(c/2)(1/(1-x) + 1/(1+x))
    std::array<double, 5> g{};
    double fact = 1.0, pa = 1.0 / a, pb = 1.0 / b;
    for (int k = 0; k <= 4; ++k) {
        if (k > 0) fact *= k;
        g[k] = -0.5 * c * fact * (pa + ((k % 2) ? -pb : pb));
        pa /= a;
        pb /= b;
    }
    const double g1 = g[1], g2 = g[2], g3 = g[3], g4 = g[4];
    out[0] = f;
    out[1] = g1 * f;
    out[2] = (g2 + g1 * g1) * f;
    out[3] = (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * f;
    out[4] = (g4 + 4.0 * g1 * g3 + 3.0 * g2 * g2 + 6.0 * g1 * g1 * g2 + g1 * g1 * g1 * g1) * f;
    return out;
}

}  // namespace

TestFunction make_bump(double sharpness) {
    if (!(sharpness > 0.0)) throw InvalidArgument("make_bump: sharpness must be positive");
    return TestFunction([sharpness](int k, double x) { return bump_derivatives(sharpness, x)[k]; },
                        1.0, sharpness == 1.0 ? "bump" : "bump_c" + std::to_string(sharpness));
}

TestFunction make_odd_bump() {
    return TestFunction(
        [](int k, double x) {
            const auto d = bump_derivatives(1.0, x);
            return x * d[k] + (k > 0 ? k * d[k - 1] : 0.0);
        },
        1.0, "odd_bump");
}

TestFunction make_zero() { return TestFunction(); }

TestFunction make_custom(TestFunction::Eval eval, double support_radius, std::string name) {
    if (!eval) throw InvalidArgument("make_custom: empty evaluator");
    return TestFunction(std::move(eval), support_radius, std::move(name));
}

TestFunction builtin_test_function(const std::string& name, double amplitude) {
    TestFunction f;
    if (name == "bump") {
        f = make_bump(1.0);
    } else if (name == "flat_bump") {
        TestFunction b = make_bump(0.25);
        f = TestFunction([b](int k, double x) { return b.eval(k, x); }, 1.0, "flat_bump");
    } else if (name == "odd_bump") {
        f = make_odd_bump();
    } else if (name == "zero") {
        return make_zero();
    } else {
        throw InvalidArgument("unknown test function: " + name);
    }
    return amplitude == 1.0 ? f : f.scaled(amplitude);
}

RescaledTestFunction::RescaledTestFunction(TestFunction base, double ell, double center)
    : base_(std::move(base)), ell_(ell), center_(center) {
    if (!(ell > 0.0) || !std::isfinite(ell)) throw InvalidArgument("rescaling: ell must be positive");
}

double RescaledTestFunction::eval(int k, double x) const {
    const double v = base_.eval(k, (x - center_) / ell_);
    if (v == 0.0) return 0.0;
    return k == 0 ? v : v * std::pow(ell_, -k);
}

RescaledTestFunction RescaledTestFunction::translated(double shift) const {
    return RescaledTestFunction(base_, ell_, center_ + shift);
}

double RescaledTestFunction::integral() const {
    if (base_.is_zero()) return 0.0;
    const double r = base_.support_radius();
    std::vector<double> br;
    for (int i = 0; i <= 16; ++i) br.push_back(-r + 2.0 * r * i / 16.0);
    const double v = quad::adaptive([&](double u) { return base_.eval(0, u); }, br,
                                    {1e-15, 1e-14});
    return ell_ * v;
}

double seminorm_step(double support_scale, bool refine) {
    return 1e-3 * std::max(1.0, support_scale) * (refine ? 0.1 : 1.0);
}

namespace {

template <class F>
double grid_sup(const F& f, double lo, double hi, double origin, double step) {
    // grid nodes are origin + j * step
    const long j0 = static_cast<long>(std::ceil((lo - origin) / step));
    const long j1 = static_cast<long>(std::floor((hi - origin) / step));
    double m = 0.0;
    for (long j = j0; j <= j1; ++j) m = std::max(m, std::abs(f(origin + j * step)));
    return m;
}

}  // namespace

double local_seminorm(const TestFunction& f, int k, double x, bool refine) {
    const double r = f.support_radius();
    const double lo = std::max(x - 3.0, -r), hi = std::min(x + 3.0, r);
    if (lo >= hi || f.is_zero()) return 0.0;
    const double step = seminorm_step(r, refine);
    return grid_sup([&](double t) { return f.eval(k, t); }, lo, hi, 0.0, step);
}

double local_seminorm(const RescaledTestFunction& f, int k, double x, bool refine) {
    const double lo = std::max(x - 3.0, f.support_lo()), hi = std::min(x + 3.0, f.support_hi());
    if (lo >= hi || f.base().is_zero()) return 0.0;
    const double step = seminorm_step(f.support_radius(), refine);
    return grid_sup([&](double t) { return f.eval(k, t); }, lo, hi, f.center(), step);
}

double global_seminorm(const TestFunction& f, int k, bool refine) {
    if (f.is_zero()) return 0.0;
    const double r = f.support_radius();
    return grid_sup([&](double t) { return f.eval(k, t); }, -r, r, 0.0, seminorm_step(r, refine));
}

double global_seminorm(const RescaledTestFunction& f, int k, bool refine) {
    if (f.base().is_zero()) return 0.0;
    const double r = f.base().support_radius();
    const double step = seminorm_step(r, refine);
    // nodes center + ell * (j * step): the images of the base grid
    double m = 0.0;
    const long j1 = static_cast<long>(std::floor(r / step));
    for (long j = -j1; j <= j1; ++j)
        m = std::max(m, std::abs(f.eval(k, f.center() + f.ell() * (j * step))));
    return m;
}

namespace {

using Deriv = std::function<double(int, double)>;

// Difference-quotient double integral over the support [c - r, c + r], plus the closed-form
// contribution of pairs with one point outside the support.
double h_half_impl(const Deriv& f, double c, double r) {
    const double lo = c - r, hi = c + r;
    const double near = 1e-4 * r;
    auto dq = [&](double x, double y) {
        const double h = x - y;
        if (std::abs(h) < near) {
            const double m = 0.5 * (x + y);
            return f(1, m) + f(3, m) * h * h / 24.0;
        }
        return (f(0, x) - f(0, y)) / h;
    };
    std::vector<double> br;
    for (int i = 0; i <= 8; ++i) br.push_back(lo + 2.0 * r * i / 8.0);
    auto inner = [&](double x) {
        if (x <= lo) return 0.0;
        std::vector<double> ib = quad::merge_breaks(lo, x, br);
        return quad::adaptive(
            [&](double y) {
                const double d = dq(x, y);
                return d * d;
            },
            ib, {1e-16, 1e-11});
    };
    const double square = 2.0 * quad::adaptive(inner, br, {1e-14, 1e-12});
    const double outside = 2.0 * quad::adaptive(
                                     [&](double x) {
                                         const double v = f(0, x);
                                         if (v == 0.0) return 0.0;
                                         return v * v * (1.0 / (hi - x) + 1.0 / (x - lo));
                                     },
                                     br, {1e-15, 1e-13});
    const double total = (square + outside) / (4.0 * std::numbers::pi * std::numbers::pi);
    if (!std::isfinite(total)) throw NonFinite("h_half_norm_sq: non-finite result");
    return total;
}

}  // namespace

double h_half_norm_sq(const TestFunction& f) {
    if (f.is_zero()) return 0.0;
    return h_half_impl([&](int k, double x) { return f.eval(k, x); }, 0.0, f.support_radius());
}

double h_half_norm_sq(const RescaledTestFunction& f) {
    if (f.base().is_zero()) return 0.0;
    return h_half_impl([&](int k, double x) { return f.eval(k, x); }, f.center(),
                       f.support_radius());
}

}  // namespace sinebeta
