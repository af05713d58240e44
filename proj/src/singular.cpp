#include "sinebeta/singular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sinebeta/errors.hpp"

namespace sinebeta {

namespace {

constexpr int kPanelNodes = 16;
constexpr int kSupportPanels = 64;
// |x - center| / half-width beyond which the plain (non-singular) integral is used
constexpr double kFarFieldRatio = 1.125;

}  // namespace

double cauchy_pv(const PVIntegrand& g, double x, double abs_tol) {
    const double s = g.support;
    const double U = std::abs(x) + s + 1.0;
    const double cutoff = kPVQuotientCutoff * s;
    auto integrand = [&](double u) {
        if (u < cutoff) return 2.0 * g.dg(x);
        return (g.g(x + u) - g.g(x - u)) / u;
    };
    std::vector<double> extra{std::abs(x - s), std::abs(x + s)};
    for (int i = 1; i < 8; ++i) extra.push_back(std::abs(x) + s * i / 8.0);
    for (int i = 1; i < 8; ++i) extra.push_back(2.0 * s * i / 8.0);
    const auto br = quad::merge_breaks(0.0, U, extra);
    const double v = quad::adaptive(integrand, br, {abs_tol, 1e-13});
    if (!std::isfinite(v)) throw NonFinite("cauchy_pv: non-finite value");
    return v;
}

double weighted_pv_zero_identity(double lambda, double x) {
    if (!(std::abs(x) < lambda)) throw InvalidArgument("weighted_pv_zero_identity: need |x| < lambda");
    const double th0 = std::asin(x / lambda);
    const double umax = std::numbers::pi / 2 - std::abs(th0);
    const double s0 = std::sin(th0);
    if (s0 == 0.0) return 0.0;
    // symmetric pairing around theta0 is regular
    const double paired = quad::adaptive(
        [&](double u) { return s0 / (std::cos(th0 + 0.5 * u) * std::cos(th0 - 0.5 * u)); }, 0.0, umax,
        {1e-15, 1e-15});
    // leftover one-sided range, away from theta0 by at least umax
    double a, b;
    if (th0 > 0) {
        a = -std::numbers::pi / 2;
        b = 2.0 * th0 - std::numbers::pi / 2;
    } else {
        a = 2.0 * th0 + std::numbers::pi / 2;
        b = std::numbers::pi / 2;
    }
    const double rest = quad::adaptive(
        [&](double th) {
            return 1.0 / (2.0 * std::cos(0.5 * (th + th0)) * std::sin(0.5 * (th - th0)));
        },
        a, b, {1e-15, 1e-15});
    return (paired + rest) / lambda;
}

void check_scale_separation(double lambda, double ell, ScaleMode mode) {
    if (!(lambda > 0.0) || !(ell > 0.0))
        throw ScaleSeparationViolated("lambda and ell must be positive");
    if (mode == ScaleMode::strict) {
        if (!(ell > 100.0 && ell < lambda / 1000.0))
            throw ScaleSeparationViolated("need 100 < ell < lambda/1000 (ell=" + std::to_string(ell) +
                                          ", lambda=" + std::to_string(lambda) + ")");
    } else if (!(ell < lambda / 4.0)) {
        throw ScaleSeparationViolated("need ell < lambda/4 in relaxed mode");
    }
}

HilbertEvaluator::HilbertEvaluator(double lambda, RescaledTestFunction phi, ScaleMode mode)
    : lambda_(lambda), phi_(std::move(phi)), mode_(mode) {
    check_scale_separation(lambda, phi_.ell(), mode);
    lo_ = phi_.support_lo();
    hi_ = phi_.support_hi();
    if (!(lo_ > -lambda / 2 && hi_ < lambda / 2))
        throw ScaleSeparationViolated("support of phi must lie well inside (-lambda, lambda)");
    const quad::Rule& r = quad::gauss_legendre(kPanelNodes);
    const double h = (hi_ - lo_) / kSupportPanels;
    for (int p = 0; p < kSupportPanels; ++p) {
        const double m = lo_ + (p + 0.5) * h;
        for (int i = 0; i < kPanelNodes; ++i) {
            nodes_.push_back(m + 0.5 * h * r.x[i]);
            weights_.push_back(0.5 * h * r.w[i]);
        }
    }
    for (int k = 0; k < 3; ++k) {
        cached_[k].reserve(nodes_.size());
        for (double t : nodes_) cached_[k].push_back(phi_lambda(k, t));
    }
}

double HilbertEvaluator::phi_lambda(int k, double t) const {
    if (!(t > lo_ && t < hi_)) return 0.0;
    const double l2 = lambda_ * lambda_;
    const double w = std::sqrt((lambda_ - t) * (lambda_ + t));
    const double d1 = phi_.eval(1, t);
    switch (k) {
        case 0:
            return w * d1;
        case 1: {
            const double w1 = -t / w;
            return w1 * d1 + w * phi_.eval(2, t);
        }
        case 2: {
            const double w1 = -t / w, w2 = -l2 / (w * w * w);
            return w2 * d1 + 2.0 * w1 * phi_.eval(2, t) + w * phi_.eval(3, t);
        }
        case 3: {
            const double w1 = -t / w, w2 = -l2 / (w * w * w);
            const double w3 = -3.0 * l2 * t / (w * w * w * w * w);
            return w3 * d1 + 3.0 * w2 * phi_.eval(2, t) + 3.0 * w1 * phi_.eval(3, t) +
                   w * phi_.eval(4, t);
        }
        default:
            throw InvalidArgument("phi_lambda: derivative order must be in 0..3");
    }
}

double HilbertEvaluator::far_field(double x, int k) const {
    const auto& g = cached_[k];
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * g[i] / (nodes_[i] - x);
    return s;
}

double HilbertEvaluator::near_field(double x, int k) const {
    const double half = 0.5 * (hi_ - lo_);
    const double U = std::max(std::abs(x - lo_), std::abs(x - hi_));
    const double cutoff = kPVQuotientCutoff * half;
    std::vector<double> extra{std::abs(x - lo_), std::abs(x - hi_)};
    const double step = (hi_ - lo_) / kSupportPanels;
    const auto base = quad::merge_breaks(0.0, U, extra);
    const quad::Rule& r = quad::gauss_legendre(kPanelNodes);
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < base.size(); ++p) {
        const int n = std::max(1, static_cast<int>(std::ceil((base[p + 1] - base[p]) / step)));
        const double h = (base[p + 1] - base[p]) / n;
        for (int j = 0; j < n; ++j) {
            const double m = base[p] + (j + 0.5) * h;
            double acc = 0.0;
            for (int i = 0; i < kPanelNodes; ++i) {
                const double u = m + 0.5 * h * r.x[i];
                const double v = u < cutoff ? 2.0 * phi_lambda(k + 1, x)
                                            : (phi_lambda(k, x + u) - phi_lambda(k, x - u)) / u;
                acc += r.w[i] * v;
            }
            s += 0.5 * h * acc;
        }
    }
    return s;
}

double HilbertEvaluator::operator()(double x, int k) const {
    if (k < 0 || k > 2) throw InvalidArgument("hilbert_transform: derivative order must be 0..2");
    if (phi_.base().is_zero()) return 0.0;
    const double c = 0.5 * (lo_ + hi_), half = 0.5 * (hi_ - lo_);
    const double v = std::abs(x - c) >= kFarFieldRatio * half ? far_field(x, k) : near_field(x, k);
    if (!std::isfinite(v)) throw NonFinite("hilbert_transform: non-finite value");
    return v / std::numbers::pi;
}

double HilbertEvaluator::adaptive(double x, int k) const {
    if (phi_.base().is_zero()) return 0.0;
    PVIntegrand g{[this, k](double t) { return phi_lambda(k, t); },
                  [this, k](double t) { return phi_lambda(k + 1, t); },
                  std::max(std::abs(lo_), std::abs(hi_))};
    return cauchy_pv(g, x, 1e-13) / std::numbers::pi;
}

std::pair<double, double> phi_lambda_decomposition(const HilbertEvaluator& h, double t) {
    const double main = h.lambda() * h.phi().eval(1, t);
    return {main, h.phi_lambda(0, t) - main};
}

}  // namespace sinebeta
