#pragma once

#include <array>
#include <memory>
#include <vector>

#include "sinebeta/chebyshev.hpp"
#include "sinebeta/jet.hpp"
#include "sinebeta/singular.hpp"
#include "sinebeta/testfn.hpp"

namespace sinebeta {

enum class Side { left, right };
enum class PotentialKind { full_m, error_left, error_right };

// patched: the C^2 modification vanishing near the endpoints.
// identity: m_tilde is set equal to m (used to check that error potentials vanish).
enum class ApproxKind { patched, identity };

// Patch data for one endpoint. On the left, with P = -lambda + ell and size = ell / 2,
//   R(x) = S_a((x - P) / size) * (D0 + D1 (x - P) + D2 (x - P)^2 / 2)   on [P - size, P],
//   T(x) = (Dm1 / size_t) * S_d((x - Pt) / size_t)                     on [Pt - size_t, Pt],
// with Pt = -lambda + ell / 2 and size_t = ell / 4. The right side is the mirror image.
struct EndPatch {
    double P = 0.0, size = 0.0;
    double D0 = 0.0, D1 = 0.0, D2 = 0.0;
    double Pt = 0.0, size_t_ = 0.0;
    double Dm1 = 0.0;
    double strip_mass_m = 0.0;  // integral of m over the endpoint strip of width ell
    double mass_R = 0.0;
};

// Smooth step S_a on [-1, 0]: 0 with all derivatives at -1, 1 with vanishing derivatives at 0.
Jet smooth_step(Jet u);
// Normalized bump S_d on [-1, 0] with unit integral and all derivatives vanishing at -1 and 0.
Jet unit_bump(Jet u);

class PerturbationBundle {
public:
    PerturbationBundle(double lambda, RescaledTestFunction phi, ScaleMode mode = ScaleMode::strict,
                       ApproxKind kind = ApproxKind::patched);

    double lambda() const { return lambda_; }
    double ell() const { return hilbert_->ell(); }
    const RescaledTestFunction& phi() const { return hilbert_->phi(); }
    const HilbertEvaluator& hilbert() const { return *hilbert_; }
    ApproxKind kind() const { return kind_; }
    bool is_zero() const { return zero_; }

    // h^{(k)} from the piecewise Chebyshev representation
    double h(double x, int k = 0) const;
    // m^{(k)}(x) = d^k/dx^k [-h(x) / (pi sqrt(lambda^2 - x^2))], k in 0..2
    double m(double x, int k = 0) const;
    // same, with h evaluated directly by the Hilbert evaluator
    double m_direct(double x, int k = 0) const;
    // m(lambda sin(theta)) * lambda cos(theta) = -h(lambda sin(theta)) / pi
    double m_theta(double theta) const;
    double m_tilde(double x, int k = 0) const;
    // (m_tilde - m)(lambda sin theta) * lambda cos theta, on the endpoint strips
    double difference_theta(double theta) const;

    Jet patch_R(double x, Side side) const;
    Jet patch_T(double x, Side side) const;
    const EndPatch& patch(Side side) const { return side == Side::left ? left_ : right_; }

    // {-lambda + ell/4, -lambda + ell/2, -lambda + ell, lambda - ell, lambda - ell/2, lambda - ell/4}
    std::array<double, 6> junctions() const;
    // quadrature break points on [-lambda, lambda] adapted to m_tilde
    const std::vector<double>& breaks() const { return breaks_; }
    std::vector<double> theta_breaks(double lo, double hi) const;

    double total_mass_m() const;
    double total_mass_m_tilde() const;
    double strip_mass_m(Side side) const { return patch(side).strip_mass_m; }
    double strip_mass_m_tilde(Side side) const;
    double l1_norm_m_tilde() const { return l1_; }
    double sup_norm_m_tilde() const { return sup_; }

    // int -log|x - y| m(y) dy
    double lp(double x) const;
    // int over one endpoint strip of -log|x - y| (m_tilde - m)(y) dy
    double error_log(double x, Side side) const;
    double log_potential(double x, PotentialKind which) const;
    // int -log|x - y| m_tilde(y) dy computed directly in y
    double tilde_potential(double x) const;
    // int m(y) U(y) dy and int (m_tilde - m)(y) U(y) dy for U the potential of Lebesgue on Lambda
    double m_against_lebesgue_potential() const;
    double error_against_lebesgue_potential() const;
    double tilde_against_lebesgue_potential() const;

private:
    double w_weight(double x, int k) const;
    double m_from_h(double x, int k, double h0, double h1, double h2) const;
    void build_breaks();
    void build_interpolants();
    void build_patches();

    double lambda_;
    std::shared_ptr<HilbertEvaluator> hilbert_;
    ApproxKind kind_;
    bool zero_ = false;
    double center_ = 0.0, half_ = 1.0;
    std::vector<double> breaks_;
    PiecewiseChebyshev hq_[3];  // h^{(k)} times a decay weight
    EndPatch left_, right_;
    double bump_integral_ = 1.0;
    double l1_ = 0.0, sup_ = 0.0;
};

struct VarianceTerm {
    double v = 0.0;       // int int -log|x-y| m_tilde(x) m_tilde(y)
    double target = 0.0;  // 2 |phi|^2_{H^{1/2}}
    double errvar = 0.0;  // v - target
};

VarianceTerm variance_term(const PerturbationBundle& b);
// int int -log|x-y| m(x) m(y) = int m LP, computed in the theta variable
double variance_via_m(const PerturbationBundle& b);
// int phi(x) m(x) dx
double phi_pairing(const PerturbationBundle& b);

// sup over a grid of |m_tilde^{(k)}(x)| / envelope_k(x) per regime
// (|x| <= 2 ell, 2 ell..lambda/2, lambda/2..lambda-ell, lambda-ell..lambda).
struct EnvelopeReport {
    std::array<std::array<double, 4>, 3> ratio{};
    double l1 = 0.0;
};
double envelope(double x, int k, double lambda, double ell);
EnvelopeReport envelope_ratios(const PerturbationBundle& b, int points_per_regime = 400);

}  // namespace sinebeta
