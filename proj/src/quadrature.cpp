#include "sinebeta/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sinebeta/errors.hpp"

namespace sinebeta::quad {

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}


namespace {

Rule make_rule(int n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

struct Panel {
    double a, b, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with the embedded 10-point Gauss estimate; nodes and weights
// come from Boost.Math.
Panel kronrod(const Fn& f, double a, double b) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    const double f0 = f(m);
    double k = f0 * wk[0], g = 0.0, l1 = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(m + h * x[i]), fm = f(m - h * x[i]);
        k += (fp + fm) * wk[i];
        l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 1) g += (fp + fm) * wg[i / 2];
    }
    const double err = std::max(std::abs(k - g), 2.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
    return {a, b, k * h, err * std::abs(h), l1 * std::abs(h)};
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<Rule>> cache;
    if (n < 1) throw InvalidArgument("gauss_legendre: order must be positive");
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Rule>(make_rule(n));
    return *slot;
}

double gauss(const Fn& f, double a, double b, int n) {
    const Rule& r = gauss_legendre(n);
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(m + h * r.x[i]);
    return s * h;
}

double composite_gauss(const Fn& f, std::span<const double> breaks, int n) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) s += gauss(f, breaks[i], breaks[i + 1], n);
    return s;
}

Result adaptive_result(const Fn& f, double a, double b, Tolerance tol, int max_panels) {
    Result res;
    if (a == b) return res;
    std::priority_queue<Panel> heap;
    Panel first = kronrod(f, a, b);
    double total = first.value, err = first.error, l1 = first.l1;
    heap.push(first);
    int count = 1;
    auto target = [&] { return std::max(tol.abs, tol.rel * l1); };
    while (err > target() && count < max_panels) {
        Panel p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b))) break;
        heap.pop();
        Panel left = kronrod(f, p.a, mid), right = kronrod(f, mid, p.b);
        total += left.value + right.value - p.value;
        err += left.error + right.error - p.error;
        l1 += left.l1 + right.l1 - p.l1;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    // re-sum to avoid drift from the incremental updates
    total = 0.0;
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    res.value = total;
    res.error = err;
    res.panels = count;
    res.l1 = l1;
    res.converged = err <= target();
    if (!std::isfinite(total)) throw NonFinite("adaptive quadrature produced a non-finite value");
    return res;
}

double adaptive(const Fn& f, double a, double b, Tolerance tol, int max_panels) {
    Result r = adaptive_result(f, a, b, tol, max_panels);
    if (!r.converged && r.error > std::max(100.0 * tol.abs, 1e-6 * r.l1)) {
        throw NonFinite("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                        std::to_string(b) + "], error estimate " + fmt_g(r.error) + ", L1 " + fmt_g(r.l1));
    }
    return r.value;
}

double adaptive(const Fn& f, std::span<const double> breaks, Tolerance tol, int max_panels) {
    double s = 0.0;
    const std::size_t n = breaks.size() > 1 ? breaks.size() - 1 : 1;
    Tolerance each{tol.abs / static_cast<double>(n), tol.rel};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        s += adaptive(f, breaks[i], breaks[i + 1], each, max_panels);
    return s;
}

std::vector<double> merge_breaks(double a, double b, std::span<const double> extra) {
    std::vector<double> out{a, b};
    for (double x : extra)
        if (x > a && x < b) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Range of the exponential substitution; exp(-80) is below any tolerance of interest even
// for inverse square-root singularities.
constexpr double kSubstitutionSpan = 80.0;

double singular_panel(const SingularFn& f, double c, double h, double side, Tolerance tol) {
    const double w0 = -std::log(h);
    const double pts[] = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, kSubstitutionSpan};
    std::vector<double> breaks;
    for (double p : pts) breaks.push_back(w0 + p);
    Fn g = [&](double w) {
        const double d = side * std::exp(-w);
        return f(c + d, d) * std::exp(-w);
    };
    return adaptive(g, breaks, tol);
}

}  // namespace

double singular(const SingularFn& f, double a, double b, double c, std::span<const double> breaks,
                Tolerance tol) {
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> extra(breaks.begin(), breaks.end());
    extra.push_back(c);
    const std::vector<double> pts = merge_breaks(a, b, extra);
    const std::size_t np = pts.size() - 1;
    Tolerance each{tol.abs / static_cast<double>(np), tol.rel};
    double s = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        if (lo == c) {
            s += singular_panel(f, c, hi - c, 1.0, each);
        } else if (hi == c) {
            s += singular_panel(f, c, c - lo, -1.0, each);
        } else {
            Fn g = [&](double t) { return f(t, t - c); };
            s += adaptive(g, lo, hi, each);
        }
    }
    return sign * s;
}

namespace {
// antiderivative of log|t|
double xlogx_minus_x(double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; }
// Q with Q'' = -log|t|
double q_kernel(double t) {
    return t == 0.0 ? 0.0 : -0.5 * t * t * std::log(std::abs(t)) + 0.75 * t * t;
}
}  // namespace

double log_potential_interval(double a, double b, double x) {
    return -(xlogx_minus_x(b - x) - xlogx_minus_x(a - x));
}

double log_energy_rectangle(double a1, double b1, double a2, double b2) {
    return -q_kernel(b1 - b2) + q_kernel(a1 - b2) + q_kernel(b1 - a2) - q_kernel(a1 - a2);
}

}  // namespace sinebeta::quad
