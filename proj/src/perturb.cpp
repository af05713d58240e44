#include "sinebeta/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sinebeta/errors.hpp"
#include "sinebeta/quadrature.hpp"

namespace sinebeta {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kChebDegree = 24;
constexpr int kPatchSubpanels = 8;
// |x| >= lambda (1 - kEndpointGuard) is refused by the density evaluators
constexpr double kEndpointGuard = 1e-9;
// below this distance to 0 or 1 the smooth step is flat to double precision
constexpr double kStepFlat = 2e-3;

double bump_integral() {
    static const double v = RescaledTestFunction(make_bump(), 1.0).integral();
    return v;
}

double clamp_unit(double v) { return std::max(-1.0, std::min(1.0, v)); }

}  // namespace

Jet smooth_step(Jet u) {
    const Jet t = u + 1.0;
    if (t.v <= kStepFlat) return {0.0, 0.0, 0.0};
    if (t.v >= 1.0 - kStepFlat) return {1.0, 0.0, 0.0};
    const Jet z = reciprocal(t) - reciprocal(1.0 - t);
    return reciprocal(1.0 + exp(z));
}

Jet unit_bump(Jet u) {
    const Jet v = 2.0 * u + 1.0;
    const Jet q = 1.0 - v * v;
    if (q.v <= kStepFlat) return {0.0, 0.0, 0.0};
    return (2.0 / bump_integral()) * exp(-reciprocal(q));
}

PerturbationBundle::PerturbationBundle(double lambda, RescaledTestFunction phi, ScaleMode mode,
                                       ApproxKind kind)
    : lambda_(lambda),
      hilbert_(std::make_shared<HilbertEvaluator>(lambda, phi, mode)),
      kind_(kind) {
    zero_ = phi.base().is_zero();
    center_ = phi.center();
    half_ = phi.support_radius();
    build_breaks();
    if (zero_) return;
    build_interpolants();
    build_patches();
    if (kind_ == ApproxKind::identity)
        // m itself diverges at the endpoints; integrate in theta instead
        l1_ = quad::adaptive([this](double t) { return std::abs(m_theta(t)); }, theta_breaks(-lambda_, lambda_),
                             {1e-15, 1e-12});
    else
        l1_ = quad::adaptive([this](double x) { return std::abs(m_tilde(x)); }, breaks_, {1e-15, 1e-12});
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        const double a = breaks_[i], b = breaks_[i + 1];
        for (int j = 0; j <= 64; ++j) {
            const double x = a + (b - a) * j / 64.0;
            if (std::abs(x) >= lambda_ * (1.0 - kEndpointGuard) && kind_ == ApproxKind::identity) continue;
            sup_ = std::max(sup_, std::abs(m_tilde(x)));
        }
    }
}

std::array<double, 6> PerturbationBundle::junctions() const {
    const double L = lambda_, l = ell();
    return {-L + l / 4, -L + l / 2, -L + l, L - l, L - l / 2, L - l / 4};
}

void PerturbationBundle::build_breaks() {
    const double L = lambda_, l = ell();
    std::vector<double> pts;
    for (double j : junctions()) pts.push_back(j);
    for (int s : {-1, 1}) {
        for (int i = 1; i < kPatchSubpanels; ++i) {
            pts.push_back(s * (L - l / 4 - (l / 4) * i / kPatchSubpanels));
            pts.push_back(s * (L - l / 2 - (l / 2) * i / kPatchSubpanels));
        }
        for (double f : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5}) pts.push_back(center_ + s * f * half_);
        for (double d = 2.0 * half_; d < 2.0 * L; d *= 1.5) pts.push_back(center_ + s * d);
        for (double d = 1.5 * l; d < L; d *= 1.5) pts.push_back(s * (L - d));
    }
    pts.push_back(center_);
    std::vector<double> inside;
    for (double p : pts)
        if (p > -L + l && p < L - l) inside.push_back(p);
    for (double j : junctions()) inside.push_back(j);
    for (double p : pts)
        if (std::abs(p) > L - l) inside.push_back(p);
    breaks_ = quad::merge_breaks(-L, L, inside);
    // drop breaks that are too close to each other
    std::vector<double> cleaned{breaks_.front()};
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (breaks_[i] - cleaned.back() > 1e-9 * L || i + 1 == breaks_.size()) cleaned.push_back(breaks_[i]);
    breaks_ = cleaned;
}

double PerturbationBundle::w_weight(double x, int k) const {
    const double r = (x - center_) / half_;
    return std::pow(1.0 + r * r, 1.0 + 0.5 * k);
}

void PerturbationBundle::build_interpolants() {
    for (int k = 0; k < 3; ++k) {
        double scale = 0.0;
        for (int j = -16; j <= 16; ++j) {
            const double x = center_ + half_ * j / 8.0;
            scale = std::max(scale, std::abs((*hilbert_)(x, k) * w_weight(x, k)));
        }
        if (scale == 0.0) scale = 1.0;
        hq_[k] = PiecewiseChebyshev::build(
            [this, k](double x) { return (*hilbert_)(x, k) * w_weight(x, k); }, breaks_, kChebDegree,
            1e-14 * scale);
    }
}

double PerturbationBundle::h(double x, int k) const {
    if (zero_) return 0.0;
    return hq_[k](x) / w_weight(x, k);
}

double PerturbationBundle::m_from_h(double x, int k, double h0, double h1, double h2) const {
    const double L = lambda_;
    const double s2 = (L - x) * (L + x);
    const double s = std::sqrt(s2);
    const double W = -1.0 / (kPi * s);
    if (k == 0) return W * h0;
    const double W1 = -x / (kPi * s * s2);
    if (k == 1) return W1 * h0 + W * h1;
    const double W2 = -(L * L + 2.0 * x * x) / (kPi * s * s2 * s2);
    return W2 * h0 + 2.0 * W1 * h1 + W * h2;
}

double PerturbationBundle::m(double x, int k) const {
    if (std::abs(x) >= lambda_ * (1.0 - kEndpointGuard))
        throw EndpointSingularity("perturbation density diverges at the endpoints");
    if (zero_) return 0.0;
    return m_from_h(x, k, h(x, 0), k >= 1 ? h(x, 1) : 0.0, k >= 2 ? h(x, 2) : 0.0);
}

double PerturbationBundle::m_direct(double x, int k) const {
    if (std::abs(x) >= lambda_ * (1.0 - kEndpointGuard))
        throw EndpointSingularity("perturbation density diverges at the endpoints");
    if (zero_) return 0.0;
    const auto& H = *hilbert_;
    return m_from_h(x, k, H(x, 0), k >= 1 ? H(x, 1) : 0.0, k >= 2 ? H(x, 2) : 0.0);
}

double PerturbationBundle::m_theta(double theta) const {
    return -h(lambda_ * std::sin(theta)) / kPi;
}

Jet PerturbationBundle::patch_R(double x, Side side) const {
    const EndPatch& p = patch(side);
    const double u = side == Side::left ? (x - p.P) / p.size : (p.P - x) / p.size;
    if (u < -1.0 || u > 0.0) return {};
    const Jet uj{u, side == Side::left ? 1.0 / p.size : -1.0 / p.size, 0.0};
    const double hh = x - p.P;
    const Jet poly{p.D0 + p.D1 * hh + 0.5 * p.D2 * hh * hh, p.D1 + p.D2 * hh, p.D2};
    return smooth_step(uj) * poly;
}

Jet PerturbationBundle::patch_T(double x, Side side) const {
    const EndPatch& p = patch(side);
    const double u = side == Side::left ? (x - p.Pt) / p.size_t_ : (p.Pt - x) / p.size_t_;
    if (u < -1.0 || u > 0.0) return {};
    const Jet uj{u, side == Side::left ? 1.0 / p.size_t_ : -1.0 / p.size_t_, 0.0};
    return (p.Dm1 / p.size_t_) * unit_bump(uj);
}

double PerturbationBundle::m_tilde(double x, int k) const {
    if (k < 0 || k > 2) throw InvalidArgument("m_tilde: derivative order must be in 0..2");
    if (zero_) return 0.0;
    if (kind_ == ApproxKind::identity) return m(x, k);
    const double L = lambda_, l = ell();
    const double ax = std::abs(x);
    if (ax <= L - l) return m(x, k);
    if (ax >= L - l / 4) return 0.0;
    const Side side = x < 0 ? Side::left : Side::right;
    const Jet j = ax >= L - l / 2 ? patch_T(x, side) : patch_R(x, side);
    return k == 0 ? j.v : (k == 1 ? j.d1 : j.d2);
}

double PerturbationBundle::difference_theta(double theta) const {
    if (zero_ || kind_ == ApproxKind::identity) return 0.0;
    const double y = lambda_ * std::sin(theta);
    const double l = ell();
    if (std::abs(y) < lambda_ - l) return 0.0;
    return m_tilde(y) * lambda_ * std::cos(theta) + h(y) / kPi;
}

void PerturbationBundle::build_patches() {
    const double L = lambda_, l = ell();
    for (Side side : {Side::left, Side::right}) {
        EndPatch& p = side == Side::left ? left_ : right_;
        const double s = side == Side::left ? -1.0 : 1.0;
        p.P = s * (L - l);
        p.size = l / 2;
        p.Pt = s * (L - l / 2);
        p.size_t_ = l / 4;
        p.D0 = m_direct(p.P, 0);
        p.D1 = m_direct(p.P, 1);
        p.D2 = m_direct(p.P, 2);
        const double th1 = std::asin(p.P / L);
        const double a = side == Side::left ? -kPi / 2 : th1;
        const double b = side == Side::left ? th1 : kPi / 2;
        p.strip_mass_m = quad::adaptive([this](double t) { return m_theta(t); }, theta_breaks(a, b),
                                        {1e-17, 1e-13});
        std::vector<double> rb;
        const double r0 = std::min(p.P, p.P + s * p.size), r1 = std::max(p.P, p.P + s * p.size);
        for (int i = 0; i <= kPatchSubpanels; ++i) rb.push_back(r0 + (r1 - r0) * i / kPatchSubpanels);
        p.mass_R = quad::adaptive([this, side](double x) { return patch_R(x, side).v; }, rb,
                                  {1e-18, 1e-14});
        p.Dm1 = p.strip_mass_m - p.mass_R;
    }
}

std::vector<double> PerturbationBundle::theta_breaks(double lo, double hi) const {
    std::vector<double> th;
    for (double y : breaks_) th.push_back(std::asin(clamp_unit(y / lambda_)));
    return quad::merge_breaks(lo, hi, th);
}

double PerturbationBundle::total_mass_m() const {
    if (zero_) return 0.0;
    return quad::adaptive([this](double t) { return m_theta(t); }, theta_breaks(-kPi / 2, kPi / 2),
                          {1e-16, 1e-13});
}

double PerturbationBundle::total_mass_m_tilde() const {
    if (zero_) return 0.0;
    if (kind_ == ApproxKind::identity) return total_mass_m();
    return quad::adaptive([this](double x) { return m_tilde(x); }, breaks_, {1e-16, 1e-13});
}

double PerturbationBundle::strip_mass_m_tilde(Side side) const {
    if (zero_) return 0.0;
    const double L = lambda_, l = ell();
    const double a = side == Side::left ? -L : L - l, b = side == Side::left ? -L + l : L;
    if (kind_ == ApproxKind::identity) return strip_mass_m(side);
    return quad::adaptive([this](double x) { return m_tilde(x); }, quad::merge_breaks(a, b, breaks_),
                          {1e-18, 1e-14});
}

namespace {

// log|x - lambda sin(theta)| with theta = c + d and sin(c) = x / lambda
double log_distance_theta(double lambda, double c, double d) {
    return std::log(2.0 * lambda * std::abs(std::cos(c + 0.5 * d))) + std::log(std::abs(std::sin(0.5 * d)));
}

}  // namespace

double PerturbationBundle::lp(double x) const {
    if (zero_) return 0.0;
    const double L = lambda_;
    const auto tb = theta_breaks(-kPi / 2, kPi / 2);
    const quad::Tolerance tol{1e-15, 1e-12};
    if (std::abs(x) <= L) {
        const double c = std::asin(clamp_unit(x / L));
        return quad::singular(
            [&](double th, double d) { return h(L * std::sin(th)) * log_distance_theta(L, c, d) / kPi; },
            -kPi / 2, kPi / 2, c, tb, tol);
    }
    return quad::adaptive(
        [&](double th) {
            const double y = L * std::sin(th);
            return h(y) * std::log(std::abs(x - y)) / kPi;
        },
        tb, tol);
}

double PerturbationBundle::error_log(double x, Side side) const {
    if (zero_ || kind_ == ApproxKind::identity) return 0.0;
    const double L = lambda_, l = ell();
    const double th1 = std::asin((side == Side::left ? -1.0 : 1.0) * (L - l) / L);
    const double a = side == Side::left ? -kPi / 2 : th1;
    const double b = side == Side::left ? th1 : kPi / 2;
    const auto tb = theta_breaks(a, b);
    const quad::Tolerance tol{1e-17, 1e-12};
    if (std::abs(x) <= L) {
        const double c = std::asin(clamp_unit(x / L));
        return quad::singular(
            [&](double th, double d) { return -log_distance_theta(L, c, d) * difference_theta(th); }, a,
            b, c, tb, tol);
    }
    return quad::adaptive(
        [&](double th) { return -std::log(std::abs(x - L * std::sin(th))) * difference_theta(th); }, tb,
        tol);
}

double PerturbationBundle::log_potential(double x, PotentialKind which) const {
    switch (which) {
        case PotentialKind::full_m:
            return lp(x);
        case PotentialKind::error_left:
            return error_log(x, Side::left);
        case PotentialKind::error_right:
            return error_log(x, Side::right);
    }
    return 0.0;
}

double PerturbationBundle::tilde_potential(double x) const {
    if (zero_) return 0.0;
    if (kind_ == ApproxKind::identity) return lp(x);
    const double L = lambda_, l = ell();
    const double a = -L + l / 4, b = L - l / 4;
    return quad::singular([&](double y, double d) { return -std::log(std::abs(d)) * m_tilde(y); }, a, b,
                          x, breaks_, {1e-15, 1e-12});
}

double PerturbationBundle::m_against_lebesgue_potential() const {
    if (zero_) return 0.0;
    const double L = lambda_;
    return quad::adaptive(
        [&](double th) { return m_theta(th) * quad::log_potential_interval(-L, L, L * std::sin(th)); },
        theta_breaks(-kPi / 2, kPi / 2), {1e-15, 1e-13});
}

double PerturbationBundle::error_against_lebesgue_potential() const {
    if (zero_ || kind_ == ApproxKind::identity) return 0.0;
    const double L = lambda_, l = ell();
    const double th1 = std::asin((L - l) / L);
    auto f = [&](double th) {
        return difference_theta(th) * quad::log_potential_interval(-L, L, L * std::sin(th));
    };
    return quad::adaptive(f, theta_breaks(-kPi / 2, -th1), {1e-17, 1e-13}) +
           quad::adaptive(f, theta_breaks(th1, kPi / 2), {1e-17, 1e-13});
}

double PerturbationBundle::tilde_against_lebesgue_potential() const {
    if (zero_) return 0.0;
    if (kind_ == ApproxKind::identity) return m_against_lebesgue_potential();
    const double L = lambda_;
    return quad::adaptive([&](double y) { return m_tilde(y) * quad::log_potential_interval(-L, L, y); },
                          breaks_, {1e-15, 1e-13});
}

VarianceTerm variance_term(const PerturbationBundle& b) {
    VarianceTerm out;
    if (b.is_zero()) return out;
    const double L = b.lambda(), l = b.ell();
    const auto br = quad::merge_breaks(-L + l / 4, L - l / 4, b.breaks());
    out.v = quad::adaptive([&](double x) { return b.m_tilde(x) * b.tilde_potential(x); }, br,
                           {1e-14, 1e-11});
    out.target = 2.0 * h_half_norm_sq(b.phi().base());
    out.errvar = out.v - out.target;
    return out;
}

double variance_via_m(const PerturbationBundle& b) {
    if (b.is_zero()) return 0.0;
    const double L = b.lambda();
    return quad::adaptive([&](double th) { return b.m_theta(th) * b.lp(L * std::sin(th)); },
                          b.theta_breaks(-kPi / 2, kPi / 2), {1e-14, 1e-11});
}

double phi_pairing(const PerturbationBundle& b) {
    if (b.is_zero()) return 0.0;
    const auto& phi = b.phi();
    const auto br = quad::merge_breaks(phi.support_lo(), phi.support_hi(), b.breaks());
    return quad::adaptive([&](double x) { return phi(x) * b.m(x); }, br, {1e-16, 1e-13});
}

double envelope(double x, int k, double lambda, double ell) {
    const double ax = std::abs(x);
    const double c = ell / std::pow(lambda, 1.5);
    if (ax <= 2 * ell) return std::pow(ell, -(k + 1));
    if (ax <= lambda / 2) return ell / std::pow(ax, k + 2);
    if (ax <= lambda - ell) return c / std::pow(lambda - ax, k + 0.5);
    return c / std::pow(ell, k + 0.5);
}

EnvelopeReport envelope_ratios(const PerturbationBundle& b, int n) {
    EnvelopeReport rep;
    rep.l1 = b.l1_norm_m_tilde();
    if (b.is_zero()) return rep;
    const double L = b.lambda(), l = b.ell();
    const double edges[5] = {0.0, 2 * l, L / 2, L - l, L};
    for (int r = 0; r < 4; ++r) {
        for (int i = 0; i <= n; ++i) {
            const double ax = edges[r] + (edges[r + 1] - edges[r]) * i / n;
            for (double x : {ax, -ax}) {
                if (std::abs(x) >= L * (1 - kEndpointGuard)) continue;
                for (int k = 0; k < 3; ++k)
                    rep.ratio[k][r] = std::max(rep.ratio[k][r], std::abs(b.m_tilde(x, k)) / envelope(x, k, L, l));
            }
        }
    }
    return rep;
}

}  // namespace sinebeta
