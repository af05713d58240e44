#pragma once

#include <functional>
#include <memory>
#include <string>

namespace sinebeta {

// A compactly supported C^4 function on the line with exact derivatives of order 0..4.
// Support is contained in [-support_radius, support_radius].
class TestFunction {
public:
    // eval(k, x) for k in 0..4; called only for |x| < support_radius.
    using Eval = std::function<double(int k, double x)>;

    TestFunction();  // the zero function, support radius 1
    TestFunction(Eval eval, double support_radius, std::string name);

    double eval(int k, double x) const;
    double operator()(double x) const { return eval(0, x); }
    double support_radius() const { return radius_; }
    const std::string& name() const { return name_; }
    bool is_zero() const { return !eval_; }

    // c * f
    TestFunction scaled(double c) const;

private:
    Eval eval_;
    double radius_ = 1.0;
    std::string name_ = "zero";
};

// x -> exp(-c / (1 - x^2)) on |x| < 1.
TestFunction make_bump(double sharpness = 1.0);
// x -> x exp(-1 / (1 - x^2)), an odd C^inf function.
TestFunction make_odd_bump();
TestFunction make_zero();
// Plugin point for user functions: all five derivative orders must be supplied.
TestFunction make_custom(TestFunction::Eval eval, double support_radius, std::string name);
// Built-in by name: "bump", "flat_bump" (sharpness 1/4), "odd_bump", "zero".
TestFunction builtin_test_function(const std::string& name, double amplitude = 1.0);

// phi(x) = base((x - center) / ell); derivatives pick up ell^{-k}.
class RescaledTestFunction {
public:
    RescaledTestFunction() = default;
    RescaledTestFunction(TestFunction base, double ell, double center = 0.0);

    double eval(int k, double x) const;
    double operator()(double x) const { return eval(0, x); }
    const TestFunction& base() const { return base_; }
    double ell() const { return ell_; }
    double center() const { return center_; }
    // Half-width of the support around center().
    double support_radius() const { return ell_ * base_.support_radius(); }
    double support_lo() const { return center_ - support_radius(); }
    double support_hi() const { return center_ + support_radius(); }
    RescaledTestFunction translated(double shift) const;
    // integral over the line
    double integral() const;

private:
    TestFunction base_;
    double ell_ = 1.0;
    double center_ = 0.0;
};

// Grid step used by local_seminorm: 1e-3 * max(1, support scale), divided by 10 when refined.
double seminorm_step(double support_scale, bool refine = false);

// sup over a grid of [x - 3, x + 3] of |f^(k)|
double local_seminorm(const TestFunction& f, int k, double x, bool refine = false);
double local_seminorm(const RescaledTestFunction& f, int k, double x, bool refine = false);
// sup over a grid of the support of |f^(k)|; grid nodes of the rescaled function are the
// images of the base grid so that |phi_ell|_k = ell^{-k} |phi|_k holds node by node.
double global_seminorm(const TestFunction& f, int k, bool refine = false);
double global_seminorm(const RescaledTestFunction& f, int k, bool refine = false);

// (1/(2 pi))^2 double integral of squared difference quotients.
double h_half_norm_sq(const TestFunction& f);
double h_half_norm_sq(const RescaledTestFunction& f);

}  // namespace sinebeta
