#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sinebeta/testfn.hpp"

namespace sinebeta {

// Sorted finite multiset of reals, fully observed inside the window [lo, hi].
class PointConfiguration {
public:
    PointConfiguration() = default;
    PointConfiguration(std::vector<double> points, double window_lo, double window_hi);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double window_lo() const { return lo_; }
    double window_hi() const { return hi_; }
    bool contains_interval(double a, double b) const { return a >= lo_ && b <= hi_; }

    // number of points in the half-open interval [a, b)
    std::size_t count(double a, double b) const;
    // points in the closed interval [a, b]; the window becomes [a, b]
    PointConfiguration restrict_to(double a, double b) const;
    // points outside the open interval (a, b), window unchanged
    PointConfiguration exterior(double a, double b) const;
    PointConfiguration translated(double shift) const;
    // image under a map (must keep points inside the new window)
    PointConfiguration pushforward(const std::function<double(double)>& f, double window_lo,
                                   double window_hi) const;
    PointConfiguration with_points(std::vector<double> points) const;

    bool operator==(const PointConfiguration& o) const = default;

private:
    std::vector<double> points_;
    double lo_ = 0.0, hi_ = 0.0;
};

// sum of phi over the points minus the integral of phi
double fluct(const RescaledTestFunction& phi, const PointConfiguration& config);
// same with a precomputed integral of phi
double fluct(const RescaledTestFunction& phi, const PointConfiguration& config, double integral);

// |C cap [a,b)| - (b - a), with Discr[a,b] = -Discr[b,a] when a > b
double discrepancy(const PointConfiguration& config, double a, double b);

struct DiscrepancyProfile {
    double lambda = 0.0;
    long first_index = 0;  // integer i of the first entry
    std::vector<double> center, left, right;

    long last_index() const { return first_index + static_cast<long>(center.size()) - 1; }
    bool has(long i) const { return i >= first_index && i <= last_index(); }
    double at(long i) const { return center.at(static_cast<std::size_t>(i - first_index)); }
    double left_at(long i) const { return left.at(static_cast<std::size_t>(i - first_index)); }
    double right_at(long i) const { return right.at(static_cast<std::size_t>(i - first_index)); }
};

// Tabulates, for every integer i with [i, i+1] in the window,
//   center: |Discr[0,i]| + |Discr[i,i+1]| + 1
//   left:   |Discr[-lambda,i]| + |Discr[i,i+1]| + 1
//   right:  |Discr[i,lambda]| + |Discr[i,i+1]| + 1
DiscrepancyProfile discrepancy_profile(const PointConfiguration& config, double lambda);

enum class BoundFlavor { center, left, right };

// sum_i |g|_{1,V_i} * D_i over the integers i whose neighbourhood V_i = [i-3, i+3] meets the
// support of g, with D_i from the chosen flavor. With cell-midpoint expansion and summation by
// parts one gets |int g (dC - dx)| <= this value with constant 1.
double apriori_bound_rhs(const RescaledTestFunction& g, const PointConfiguration& config,
                         BoundFlavor flavor, double lambda);

}  // namespace sinebeta
