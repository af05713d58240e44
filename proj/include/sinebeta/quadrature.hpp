#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sinebeta::quad {

using Fn = std::function<double(double)>;

// Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> x, w;
};

// Cached and thread-safe; the returned reference stays valid for the program lifetime.
const Rule& gauss_legendre(int n);

double gauss(const Fn& f, double a, double b, int n = 20);
double composite_gauss(const Fn& f, std::span<const double> breaks, int n = 20);

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-12;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    int panels = 0;
    bool converged = true;
};

// Globally adaptive Gauss-Kronrod (21 points per panel). Stops when the summed error
// estimate drops below max(tol.abs, tol.rel * integral of |f|).
Result adaptive_result(const Fn& f, double a, double b, Tolerance tol = {}, int max_panels = 4000);

// As adaptive_result but throws NonFinite when the budget is exhausted with an error
// estimate above max(100 * tol.abs, 1e-6 * integral of |f|).
double adaptive(const Fn& f, double a, double b, Tolerance tol = {}, int max_panels = 4000);
double adaptive(const Fn& f, std::span<const double> breaks, Tolerance tol = {}, int max_panels = 4000);

// Integrand with an integrable singularity at c: f(t, d) receives t and d = t - c, where d is
// exact in the panels adjacent to c (substitution t = c +/- exp(-w)) so that log|d| or
// |d|^(-1/2) can be evaluated without cancellation. c may lie outside [a, b].
using SingularFn = std::function<double(double t, double d)>;
double singular(const SingularFn& f, double a, double b, double c, std::span<const double> breaks,
                Tolerance tol = {});

// Closed forms for the logarithmic kernel against Lebesgue measure.
// int_a^b -log|x - y| dy
double log_potential_interval(double a, double b, double x);
// int_{[a1,b1] x [a2,b2]} -log|x - y| dx dy
double log_energy_rectangle(double a1, double b1, double a2, double b2);

// Sorted unique union of break points restricted to [a, b], always containing a and b.
std::vector<double> merge_breaks(double a, double b, std::span<const double> extra);

// short %g formatting for error messages
std::string fmt_g(double v);

}  // namespace sinebeta::quad
