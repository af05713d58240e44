#include "sinebeta/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinebeta/errors.hpp"

namespace sinebeta {

PointConfiguration::PointConfiguration(std::vector<double> points, double window_lo,
                                       double window_hi)
    : points_(std::move(points)), lo_(window_lo), hi_(window_hi) {
    if (!(window_lo <= window_hi)) throw InvalidArgument("PointConfiguration: empty window");
    std::sort(points_.begin(), points_.end());
    for (double p : points_) {
        if (!std::isfinite(p)) throw NonFinite("PointConfiguration: non-finite point");
        if (p < lo_ || p > hi_)
            throw OutOfWindow("PointConfiguration: point " + std::to_string(p) + " outside window");
    }
}

std::size_t PointConfiguration::count(double a, double b) const {
    if (!(a < b)) return 0;
    auto first = std::lower_bound(points_.begin(), points_.end(), a);
    auto last = std::lower_bound(first, points_.end(), b);
    return static_cast<std::size_t>(last - first);
}

PointConfiguration PointConfiguration::restrict_to(double a, double b) const {
    auto first = std::lower_bound(points_.begin(), points_.end(), a);
    auto last = std::upper_bound(first, points_.end(), b);
    return PointConfiguration(std::vector<double>(first, last), a, b);
}

PointConfiguration PointConfiguration::exterior(double a, double b) const {
    std::vector<double> out;
    for (double p : points_)
        if (p <= a || p >= b) out.push_back(p);
    return PointConfiguration(std::move(out), lo_, hi_);
}

PointConfiguration PointConfiguration::translated(double shift) const {
    std::vector<double> out(points_);
    for (double& p : out) p += shift;
    return PointConfiguration(std::move(out), lo_ + shift, hi_ + shift);
}

PointConfiguration PointConfiguration::pushforward(const std::function<double(double)>& f,
                                                   double window_lo, double window_hi) const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (double p : points_) out.push_back(f(p));
    return PointConfiguration(std::move(out), window_lo, window_hi);
}

PointConfiguration PointConfiguration::with_points(std::vector<double> points) const {
    return PointConfiguration(std::move(points), lo_, hi_);
}

double fluct(const RescaledTestFunction& phi, const PointConfiguration& config) {
    return fluct(phi, config, phi.integral());
}

double fluct(const RescaledTestFunction& phi, const PointConfiguration& config, double integral) {
    if (phi.base().is_zero()) return 0.0;
    const double a = phi.support_lo(), b = phi.support_hi();
    if (!config.contains_interval(a, b))
        throw SupportExceedsWindow("fluct: support of the test function exceeds the window");
    const auto& p = config.points();
    auto first = std::lower_bound(p.begin(), p.end(), a);
    auto last = std::upper_bound(first, p.end(), b);
    double s = 0.0;
    for (auto it = first; it != last; ++it) s += phi(*it);
    return s - integral;
}

double discrepancy(const PointConfiguration& config, double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!config.contains_interval(lo, hi))
        throw OutOfWindow("discrepancy: interval not inside the observation window");
    const double d = static_cast<double>(config.count(lo, hi)) - (hi - lo);
    return a <= b ? d : -d;
}

DiscrepancyProfile discrepancy_profile(const PointConfiguration& config, double lambda) {
    if (!config.contains_interval(-lambda, lambda) || !config.contains_interval(0.0, 0.0))
        throw OutOfWindow("discrepancy_profile: [-lambda, lambda] not inside the window");
    DiscrepancyProfile prof;
    prof.lambda = lambda;
    const long i0 = static_cast<long>(std::ceil(config.window_lo()));
    const long i1 = static_cast<long>(std::floor(config.window_hi())) - 1;
    prof.first_index = i0;
    for (long i = i0; i <= i1; ++i) {
        const double x = static_cast<double>(i);
        const double cell = std::abs(discrepancy(config, x, x + 1.0));
        prof.center.push_back(std::abs(discrepancy(config, 0.0, x)) + cell + 1.0);
        prof.left.push_back(std::abs(discrepancy(config, -lambda, x)) + cell + 1.0);
        prof.right.push_back(std::abs(discrepancy(config, x, lambda)) + cell + 1.0);
    }
    return prof;
}

double apriori_bound_rhs(const RescaledTestFunction& g, const PointConfiguration& config,
                         BoundFlavor flavor, double lambda) {
    if (g.base().is_zero()) return 0.0;
    const double lo = g.support_lo(), hi = g.support_hi();
    // cells whose terms the summation-by-parts argument actually uses
    const double need_lo = std::floor(lo - 1.0), need_hi = std::ceil(hi + 1.0) + 1.0;
    if (!config.contains_interval(need_lo, need_hi))
        throw SupportExceedsWindow("apriori_bound_rhs: support of g too close to the window edge");
    const double anchor = flavor == BoundFlavor::center ? 0.0
                          : flavor == BoundFlavor::left ? -lambda
                                                        : lambda;
    if (!config.contains_interval(anchor, anchor))
        throw OutOfWindow("apriori_bound_rhs: anchor point outside the window");
    const long i0 = static_cast<long>(std::ceil(lo - 3.0));
    const long i1 = static_cast<long>(std::floor(hi + 3.0));
    double total = 0.0;
    for (long i = i0; i <= i1; ++i) {
        const double x = static_cast<double>(i);
        if (!config.contains_interval(x, x + 1.0)) continue;
        const double semi = local_seminorm(g, 1, x);
        if (semi == 0.0) continue;
        const double d = std::abs(discrepancy(config, anchor, x)) +
                         std::abs(discrepancy(config, x, x + 1.0)) + 1.0;
        total += semi * d;
    }
    return total;
}

}  // namespace sinebeta
