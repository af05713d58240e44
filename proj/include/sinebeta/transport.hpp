#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "sinebeta/perturb.hpp"
#include "sinebeta/pointproc.hpp"

namespace sinebeta {

// 1/2 * max(1, sup |m_tilde|, L1 norm of m_tilde)^{-1}
double s_max(const PerturbationBundle& b);

// mu_s = 1 + s m_tilde on Lambda = [-lambda, lambda] and the monotone map Phi_s pushing
// Lebesgue measure on Lambda onto mu_s.
class TransportBundle {
public:
    TransportBundle(std::shared_ptr<const PerturbationBundle> bundle, double s);

    double s() const { return s_; }
    double s_max() const { return s_max_; }
    double lambda() const { return bundle_->lambda(); }
    double ell() const { return bundle_->ell(); }
    const PerturbationBundle& bundle() const { return *bundle_; }
    std::shared_ptr<const PerturbationBundle> bundle_ptr() const { return bundle_; }

    double mu(double x) const;
    // int_{-lambda}^z mu_s
    double cumulative(double z) const;
    // Phi_s(x) = F_s^{-1}(x + lambda)
    double map(double x) const;
    double psi(double x) const;
    double psi_prime(double x) const;
    // slope of the transport; psi' on (near) diagonal pairs
    double delta(double x, double y) const;
    // as delta, with psi(x), psi(y) already known
    double delta(double x, double y, double psi_x, double psi_y) const;
    // -log(1 + Delta_s(x, y))
    double kernel_F(double x, double y) const;
    // log(1 - psi_s(y) / (x - y)), x outside Lambda
    double kernel_H(double x, double y) const;
    // sum_p chi(p) F(x, p) - int chi(y) F(x, y) dy; chi defaults to 1
    double kernel_G(const PointConfiguration& eta, double x,
                    const std::function<double(double)>& chi = {}) const;
    // int_{-lambda}^{z} m_tilde
    double mass(double z) const;
    // quadrature break points in x: preimages of the m_tilde breaks
    std::vector<double> x_breaks() const;

private:
    std::shared_ptr<const PerturbationBundle> bundle_;
    double s_ = 0.0, s_max_ = 0.5;
    double strip_lo_ = 0.0, strip_hi_ = 0.0;
    std::vector<double> breaks_;
    std::vector<double> cum_;
};

struct PsiBoundsReport {
    double sup_psi = 0.0;
    bool rough_bound_ok = true;     // sup |psi| <= 1
    double l1_ratio = 0.0;          // max |psi| / (|s| * L1 norm of m_tilde)
    std::array<double, 3> regime_ratio{};  // |x| <= 10 ell, 10 ell..lambda/2, lambda/2..lambda
    double jacobian_residual = 0.0; // max |Phi'(x) (1 + s m_tilde(Phi(x))) - 1| by central differences
    bool identity_on_strips = true;
    bool monotone = true;
    double inverse_residual = 0.0;  // max |F_s(Phi(x)) - x - lambda| / lambda
};
PsiBoundsReport psi_bounds_check(const TransportBundle& T, int grid_points = 2001);

// int f(Phi(x)) dx and int f mu_s dx
struct PushForwardCheck {
    double transported = 0.0;
    double weighted = 0.0;
    double relative = 0.0;
};
PushForwardCheck push_forward_check(const TransportBundle& T, const RescaledTestFunction& f);

struct EnergyReport {
    double main_s = 0.0, re_s = 0.0, flu_re = 0.0;
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
    double tolerance = 0.0;
    std::map<std::string, double> terms;
    bool pass() const { return std::abs(residual) <= tolerance; }
};
nlohmann::json to_json(const EnergyReport& r);

// Relative tolerance applied as rel * max(|lhs|, 1).
inline constexpr double kEnergyRelTol = 1e-5;

// (eta - 1) x (eta - 1) against the energy around mu_s plus the four correction terms
EnergyReport verify_energy_splitting(const TransportBundle& T, const PointConfiguration& eta);
// (eta_s - mu_s) x (eta_s - mu_s) against (eta - 1) x (eta - 1) + Main_s + RE_s + FluRE
EnergyReport verify_energy_expansion(const TransportBundle& T, const PointConfiguration& eta);

struct DifferenceField {
    double df = 0.0;
    double lp_part = 0.0;
    double errorlog_part = 0.0;
    double errordf = 0.0;
    double residual = 0.0;  // df - s lp_part - s errorlog_part - errordf
};
DifferenceField difference_field(const TransportBundle& T, const PointConfiguration& eta, double x);

}  // namespace sinebeta
