#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sinebeta {

// Piecewise Chebyshev interpolant built by adaptive bisection of an initial panel list.
class PiecewiseChebyshev {
public:
    PiecewiseChebyshev() = default;

    static PiecewiseChebyshev build(const std::function<double(double)>& f,
                                    std::span<const double> breaks, int degree, double abs_tol,
                                    int max_panels = 4096);

    double operator()(double x) const;
    double lo() const { return edges_.front(); }
    double hi() const { return edges_.back(); }
    std::size_t panels() const { return coeffs_.size(); }
    const std::vector<double>& edges() const { return edges_; }
    bool empty() const { return coeffs_.empty(); }

private:
    std::vector<double> edges_;
    std::vector<std::vector<double>> coeffs_;
};

// Chebyshev coefficients of f on [a, b] from n first-kind nodes.
std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, double a,
                                           double b, int n);
double clenshaw(const std::vector<double>& c, double u);

}  // namespace sinebeta
