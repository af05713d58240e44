#include "sinebeta/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinebeta/errors.hpp"

namespace sinebeta {

std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, double a,
                                           double b, int n) {
    std::vector<double> vals(n), c(n, 0.0);
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int j = 0; j < n; ++j) {
        const double u = std::cos(std::numbers::pi * (j + 0.5) / n);
        vals[j] = f(m + h * u);
        if (!std::isfinite(vals[j])) throw NonFinite("chebyshev_coefficients: non-finite sample");
    }
    for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += vals[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
        c[k] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    return c;
}

double clenshaw(const std::vector<double>& c, double u) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        const double b0 = 2.0 * u * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return u * b1 - b2 + c[0];
}

PiecewiseChebyshev PiecewiseChebyshev::build(const std::function<double(double)>& f,
                                             std::span<const double> breaks, int degree,
                                             double abs_tol, int max_panels) {
    if (breaks.size() < 2) throw InvalidArgument("PiecewiseChebyshev: need at least two breaks");
    struct Item {
        double a, b;
    };
    std::vector<Item> todo;
    for (std::size_t i = breaks.size() - 1; i >= 1; --i) todo.push_back({breaks[i - 1], breaks[i]});
    std::vector<std::pair<double, std::vector<double>>> done;
    std::vector<double> right_edges;
    int panels = 0;
    while (!todo.empty()) {
        Item it = todo.back();
        todo.pop_back();
        std::vector<double> c = chebyshev_coefficients(f, it.a, it.b, degree);
        double tail = 0.0;
        for (int k = degree - 4; k < degree; ++k) tail = std::max(tail, std::abs(c[k]));
        const bool small_enough = (it.b - it.a) <= 1e-12 * std::max(1.0, std::abs(it.a));
        if (tail <= abs_tol || small_enough || panels + static_cast<int>(todo.size()) >= max_panels) {
            done.push_back({it.a, std::move(c)});
            right_edges.push_back(it.b);
            ++panels;
        } else {
            const double mid = 0.5 * (it.a + it.b);
            todo.push_back({mid, it.b});
            todo.push_back({it.a, mid});
        }
    }
    PiecewiseChebyshev out;
    for (auto& [a, c] : done) {
        out.edges_.push_back(a);
        // drop the trailing coefficients below tolerance to speed up evaluation
        std::size_t keep = c.size();
        while (keep > 2 && std::abs(c[keep - 1]) < 1e-3 * abs_tol) --keep;
        c.resize(keep);
        out.coeffs_.push_back(std::move(c));
    }
    out.edges_.push_back(right_edges.back());
    return out;
}

double PiecewiseChebyshev::operator()(double x) const {
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    std::size_t i = it == edges_.begin() ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
    if (i >= coeffs_.size()) i = coeffs_.size() - 1;
    const double a = edges_[i], b = edges_[i + 1];
    const double u = (2.0 * x - a - b) / (b - a);
    return clenshaw(coeffs_[i], u);
}

}  // namespace sinebeta
