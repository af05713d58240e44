#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sinebeta/quadrature.hpp"
#include "sinebeta/testfn.hpp"

namespace sinebeta {

// g with its derivative, vanishing outside [-support, support].
struct PVIntegrand {
    std::function<double(double)> g;
    std::function<double(double)> dg;
    double support = 1.0;
};

// Tolerances of the singular-integral layer.
inline constexpr double kPVAbsTol = 1e-10;
// Below this |u| / support the symmetric difference quotient is replaced by 2 g'(x).
inline constexpr double kPVQuotientCutoff = 1e-7;

// PV int g(t) / (t - x) dt = int_0^U (g(x+u) - g(x-u)) / u du, U = |x| + support + 1.
double cauchy_pv(const PVIntegrand& g, double x, double abs_tol = kPVAbsTol);

// PV int_{-lambda}^{lambda} dt / (sqrt(lambda^2 - t^2) (t - x)), which vanishes identically;
// evaluated in the variable theta with t = lambda sin(theta).
double weighted_pv_zero_identity(double lambda, double x);

enum class ScaleMode {
    strict,   // 100 < ell < lambda / 1000
    relaxed,  // ell < lambda / 4
};

void check_scale_separation(double lambda, double ell, ScaleMode mode);

// h(x) = (1/pi) PV int phi_L(t) / (t - x) dt with phi_L(t) = sqrt(lambda^2 - t^2) phi'(t).
class HilbertEvaluator {
public:
    HilbertEvaluator(double lambda, RescaledTestFunction phi, ScaleMode mode = ScaleMode::strict);

    double lambda() const { return lambda_; }
    double ell() const { return phi_.ell(); }
    const RescaledTestFunction& phi() const { return phi_; }
    ScaleMode mode() const { return mode_; }
    // phi_L and its derivatives up to order 3 (uses phi' .. phi'''').
    double phi_lambda(int k, double t) const;
    // h^{(k)}(x), k in 0..2
    double operator()(double x, int k = 0) const;
    // generic adaptive route through cauchy_pv (slower, used for cross-checks)
    double adaptive(double x, int k = 0) const;
    // half-width of the support of phi around its center
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

private:
    double near_field(double x, int k) const;
    double far_field(double x, int k) const;

    double lambda_;
    RescaledTestFunction phi_;
    ScaleMode mode_;
    double lo_, hi_;
    // composite Gauss-Legendre nodes over the support with cached phi_L^{(k)} values
    std::vector<double> nodes_, weights_;
    std::vector<double> cached_[3];
};

// (lambda phi'(t), phi_L(t) - lambda phi'(t))
std::pair<double, double> phi_lambda_decomposition(const HilbertEvaluator& h, double t);

}  // namespace sinebeta
